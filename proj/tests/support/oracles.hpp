#pragma once

// Test-side oracles, kept independent of the library code paths they check.

#include <cmath>
#include <vector>

#include "morsehom/field.hpp"
#include "morsehom/geometry.hpp"

namespace testsupport {

using morsehom::ScalarField;
using morsehom::Vec2;

inline Vec2 fd_gradient(const ScalarField& f, const Vec2& q, double h = 1e-6) {
    return {(f.eval_fn({q.x + h, q.y}) - f.eval_fn({q.x - h, q.y})) / (2 * h),
            (f.eval_fn({q.x, q.y + h}) - f.eval_fn({q.x, q.y - h})) / (2 * h)};
}

/// Brute-force root census on a dense grid: cells where both gradient
/// components change sign are refined by damped fixed-point bisection on the
/// gradient norm (no reuse of the library Newton code).
inline std::vector<Vec2> grid_roots(const ScalarField& f, Vec2 lo, Vec2 hi, int n,
                                    double merge_dist) {
    auto gx = [&](double x, double y) { return f.grad_fn({x, y}).x; };
    auto gy = [&](double x, double y) { return f.grad_fn({x, y}).y; };
    std::vector<Vec2> roots;
    double dx = (hi.x - lo.x) / n, dy = (hi.y - lo.y) / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double x0 = lo.x + i * dx, x1 = x0 + dx;
            double y0 = lo.y + j * dy, y1 = y0 + dy;
            double sx[4] = {gx(x0, y0), gx(x1, y0), gx(x0, y1), gx(x1, y1)};
            double sy[4] = {gy(x0, y0), gy(x1, y0), gy(x0, y1), gy(x1, y1)};
            auto mixed = [](double* v) {
                bool pos = false, neg = false;
                for (int k = 0; k < 4; ++k) (v[k] >= 0 ? pos : neg) = true;
                return pos && neg;
            };
            if (!mixed(sx) || !mixed(sy)) continue;
            // Shrink the cell by coordinate bisection on |grad|^2 minimum over
            // a 3x3 probe, 40 rounds.
            Vec2 best{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
            double hx = dx, hy = dy;
            for (int round = 0; round < 60; ++round) {
                double bn = 1e300;
                Vec2 bq = best;
                for (int a = -1; a <= 1; ++a)
                    for (int b = -1; b <= 1; ++b) {
                        Vec2 q{best.x + a * hx / 2, best.y + b * hy / 2};
                        double nrm = f.grad_fn(q).norm2();
                        if (nrm < bn) { bn = nrm; bq = q; }
                    }
                best = bq;
                hx *= 0.6;
                hy *= 0.6;
            }
            if (f.grad_fn(best).norm() > 1e-8) continue;
            bool dup = false;
            for (const Vec2& r : roots)
                if (morsehom::dist(r, best) < merge_dist) dup = true;
            if (!dup) roots.push_back(best);
        }
    }
    return roots;
}

}  // namespace testsupport
