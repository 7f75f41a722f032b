#pragma once

#include <array>
#include <cmath>

namespace morsehom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    Vec2 operator/(double c) const { return {x / c, y / c}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
    Vec2 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
};

inline Vec2 operator*(double c, const Vec2& v) { return v * c; }
inline double dist(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Symmetric 2x2 matrix stored as (xx, xy, yy).
struct Mat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    Mat2() = default;
    Mat2(double xx_, double xy_, double yy_) : xx(xx_), xy(xy_), yy(yy_) {}

    Vec2 apply(const Vec2& v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
    double trace() const { return xx + yy; }
    double det() const { return xx * yy - xy * xy; }
    double max_abs_entry() const {
        return std::max({std::fabs(xx), std::fabs(xy), std::fabs(yy)});
    }
    Mat2 operator+(const Mat2& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
    Mat2 operator*(double c) const { return {c * xx, c * xy, c * yy}; }
};

inline Mat2 operator*(double c, const Mat2& m) { return m * c; }

struct SymEig2 {
    std::array<double, 2> values;  // ascending
    std::array<Vec2, 2> vectors;   // unit, matching values
};

/// Closed-form eigendecomposition of a symmetric 2x2 matrix.
/// Eigenvector signs are normalized (first nonzero component positive)
/// so downstream branch seeding is deterministic.
inline SymEig2 eigen_sym2(const Mat2& m) {
    SymEig2 out;
    double tr = m.trace();
    double gap = std::hypot(m.xx - m.yy, 2.0 * m.xy);
    out.values[0] = 0.5 * (tr - gap);
    out.values[1] = 0.5 * (tr + gap);

    auto vector_for = [&](double lam) -> Vec2 {
        // (A - lam I) v = 0; pick the row with the larger residual norm.
        Vec2 r0{m.xx - lam, m.xy};
        Vec2 r1{m.xy, m.yy - lam};
        Vec2 v = (r0.norm2() >= r1.norm2()) ? Vec2{-r0.y, r0.x} : Vec2{-r1.y, r1.x};
        if (v.norm2() == 0.0) v = Vec2{1.0, 0.0};
        v = v.normalized();
        if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) v = -v;
        return v;
    };

    if (gap == 0.0) {
        out.vectors[0] = {1.0, 0.0};
        out.vectors[1] = {0.0, 1.0};
    } else {
        out.vectors[0] = vector_for(out.values[0]);
        out.vectors[1] = vector_for(out.values[1]);
        // Guard against the degenerate pick when both rows nearly vanish.
        if (std::fabs(out.vectors[0].dot(out.vectors[1])) > 0.5) {
            out.vectors[1] = Vec2{-out.vectors[0].y, out.vectors[0].x};
            if (out.vectors[1].x < 0.0 || (out.vectors[1].x == 0.0 && out.vectors[1].y < 0.0))
                out.vectors[1] = -out.vectors[1];
        }
    }
    return out;
}

/// Analysis ball: perturbation lives in B_delta, flow is monitored in B_{2 delta}.
struct Ball {
    Vec2 center;
    double delta = 0.0;

    Ball() = default;
    Ball(Vec2 c, double d) : center(c), delta(d) {}

    bool contains(const Vec2& q, double radius_factor = 1.0) const {
        return dist(q, center) <= radius_factor * delta;
    }
};

}  // namespace morsehom
