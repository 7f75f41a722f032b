#include "morsehom/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "morsehom/rng.hpp"

namespace morsehom {

double ScalarField::eval(const Vec2& q) const {
    require_regular(q);
    return eval_fn(q);
}

Vec2 ScalarField::grad(const Vec2& q) const {
    require_regular(q);
    return grad_fn(q);
}

Mat2 ScalarField::hessian(const Vec2& q) const {
    require_regular(q);
    return hess_fn(q);
}

double ScalarField::singular_distance(const Vec2& q) const {
    double d = std::numeric_limits<double>::infinity();
    for (const Vec2& s : singular_set) d = std::min(d, dist(q, s));
    return d;
}

void ScalarField::require_regular(const Vec2& q, double tol) const {
    if (singular_distance(q) <= tol)
        throw SingularPointError(descriptor + ": evaluation at singular point");
}

// --- bump profile ---------------------------------------------------------
//
// chi(t) = S(2 - 2t) with S(x) = g(x) / (g(x) + g(1-x)), g(x) = exp(-1/x)
// for x > 0 and 0 otherwise. S ramps 0 -> 1 over [0, 1], so chi is 1 on
// t <= 1/2 and 0 on t >= 1 with all derivatives vanishing at the joins.

namespace {

struct GluePoint {
    double g, dg, d2g;  // g, g', g''
};

GluePoint glue(double x) {
    if (x <= 0.0) return {0.0, 0.0, 0.0};
    double inv = 1.0 / x;
    double e = std::exp(-inv);
    if (e == 0.0) return {0.0, 0.0, 0.0};
    double dg = e * inv * inv;
    double d2g = e * (inv * inv * inv * inv) * (1.0 - 2.0 * x);
    return {e, dg, d2g};
}

// S, S', S'' of the smooth step.
void smooth_step(double x, double& s, double& ds, double& d2s) {
    if (x <= 0.0) { s = 0.0; ds = 0.0; d2s = 0.0; return; }
    if (x >= 1.0) { s = 1.0; ds = 0.0; d2s = 0.0; return; }
    GluePoint a = glue(x);
    GluePoint b = glue(1.0 - x);
    double den = a.g + b.g;
    double dden = a.dg - b.dg;
    double d2den = a.d2g + b.d2g;
    s = a.g / den;
    ds = (a.dg * den - a.g * dden) / (den * den);
    d2s = (a.d2g * den - a.g * d2den) / (den * den) - 2.0 * ds * dden / den;
}

}  // namespace

double BumpProfile::value(double t) const {
    double s, ds, d2s;
    smooth_step(2.0 - 2.0 * t, s, ds, d2s);
    return s;
}

double BumpProfile::deriv(double t) const {
    double s, ds, d2s;
    smooth_step(2.0 - 2.0 * t, s, ds, d2s);
    return -2.0 * ds;
}

double BumpProfile::second_deriv(double t) const {
    double s, ds, d2s;
    smooth_step(2.0 - 2.0 * t, s, ds, d2s);
    return 4.0 * d2s;
}

// --- scales and perturbation ----------------------------------------------

namespace {

constexpr int kScaleGrid = 32;

template <typename F>
double grid_max(const ScalarField& f, const Ball& ball, F&& probe) {
    double best = 0.0;
    for (int i = 0; i < kScaleGrid; ++i) {
        for (int j = 0; j < kScaleGrid; ++j) {
            Vec2 q{ball.center.x + ball.delta * (2.0 * (i + 0.5) / kScaleGrid - 1.0),
                   ball.center.y + ball.delta * (2.0 * (j + 0.5) / kScaleGrid - 1.0)};
            if (!ball.contains(q)) continue;
            if (f.singular_distance(q) < 1e-6 * ball.delta) continue;
            best = std::max(best, probe(q));
        }
    }
    return best;
}

}  // namespace

double gradient_scale(const ScalarField& f, const Ball& ball) {
    double s = grid_max(f, ball, [&](const Vec2& q) { return f.grad_fn(q).norm(); });
    return std::max(s, 1e-300);
}

double hessian_scale(const ScalarField& f, const Ball& ball) {
    double s = grid_max(f, ball, [&](const Vec2& q) { return f.hess_fn(q).max_abs_entry(); });
    return std::max(s, 1e-300);
}

Perturbation make_perturbation(const ScalarField& base, const Ball& ball,
                               uint64_t seed, double rel_amplitude) {
    if (rel_amplitude < 0.0)
        throw BadParameterError("perturbation amplitude must be >= 0");
    SplitMix64 rng(seed);
    double angle = 2.0 * M_PI * rng.next_double();
    Perturbation p;
    p.direction = {std::cos(angle), std::sin(angle)};
    p.amplitude = rel_amplitude * gradient_scale(base, ball);
    p.seed = seed;
    return p;
}

ScalarField perturb(const ScalarField& base, const Ball& ball, const Perturbation& p) {
    if (p.amplitude < 0.0)
        throw BadParameterError("perturbation amplitude must be >= 0");
    if (ball.delta <= 0.0)
        throw BadParameterError("ball radius must be > 0");

    BumpProfile chi;
    // Plateau sanity: 1 on B_{delta/2}, 0 outside B_delta.
    if (std::fabs(chi.value(0.0) - 1.0) > 1e-14 || std::fabs(chi.value(0.49) - 1.0) > 1e-14 ||
        std::fabs(chi.value(1.0)) > 1e-14 || std::fabs(chi.value(1.7)) > 1e-14)
        throw BadCutoffError("cutoff profile is not 1 on B_{delta/2} / 0 outside B_delta");

    double lambda = p.amplitude;
    Vec2 a = p.direction.normalized();
    Vec2 x0 = ball.center;
    double delta = ball.delta;

    auto base_eval = base.eval_fn;
    auto base_grad = base.grad_fn;
    auto base_hess = base.hess_fn;

    ScalarField out;
    out.singular_set = base.singular_set;
    out.descriptor = base.descriptor + "+bump(lambda=" + std::to_string(lambda) +
                     ",seed=" + std::to_string(p.seed) + ")";

    out.eval_fn = [=](Vec2 q) {
        Vec2 d = q - x0;
        double r = d.norm();
        double t = r / delta;
        if (t >= 1.0) return base_eval(q);
        return base_eval(q) + lambda * chi.value(t) * a.dot(d);
    };

    out.grad_fn = [=](Vec2 q) {
        Vec2 d = q - x0;
        double r = d.norm();
        double t = r / delta;
        Vec2 g = base_grad(q);
        if (t >= 1.0) return g;
        double c = chi.value(t);
        g += lambda * c * a;
        if (t > 0.5 && r > 0.0) {
            // chi' is identically zero on B_{delta/2}, so r = 0 never reaches here.
            double cp = chi.deriv(t);
            g += (lambda * cp * a.dot(d) / (delta * r)) * d;
        }
        return g;
    };

    out.hess_fn = [=](Vec2 q) {
        Vec2 d = q - x0;
        double r = d.norm();
        double t = r / delta;
        Mat2 h = base_hess(q);
        if (t >= 1.0 || t <= 0.5) return h;
        double w = a.dot(d);
        double cp = chi.deriv(t);
        double cpp = chi.second_deriv(t);
        // grad of the bump term: lambda * (chi a + chi'/(delta r) w d)
        double s1 = lambda * cp / (delta * r);
        Mat2 sym_ad{2.0 * a.x * d.x, a.x * d.y + a.y * d.x, 2.0 * a.y * d.y};
        Mat2 dd{d.x * d.x, d.x * d.y, d.y * d.y};
        Mat2 eye{1.0, 0.0, 1.0};
        double s2 = lambda * w * (cpp / (delta * delta * r * r) - cp / (delta * r * r * r));
        h = h + s1 * sym_ad + s2 * dd + (lambda * w * cp / (delta * r)) * eye;
        return h;
    };

    return out;
}

// --- derivative cross-check -----------------------------------------------

DerivativeReport check_derivatives(const ScalarField& f, const std::vector<Vec2>& probes,
                                   double step) {
    DerivativeReport rep;
    for (const Vec2& q : probes) {
        double h = step * std::max(1.0, q.norm());
        Vec2 ex{h, 0.0}, ey{0.0, h};

        Vec2 g = f.grad(q);
        Vec2 g_fd{(f.eval(q + ex) - f.eval(q - ex)) / (2.0 * h),
                  (f.eval(q + ey) - f.eval(q - ey)) / (2.0 * h)};
        double gscale = std::max({1e-6, g.norm(), g_fd.norm()});
        double gerr = (g - g_fd).norm() / gscale;

        Mat2 hs = f.hessian(q);
        Vec2 gx = (f.grad(q + ex) - f.grad(q - ex)) / (2.0 * h);
        Vec2 gy = (f.grad(q + ey) - f.grad(q - ey)) / (2.0 * h);
        Mat2 h_fd{gx.x, 0.5 * (gx.y + gy.x), gy.y};
        double hscale = std::max({1e-6, hs.max_abs_entry(), h_fd.max_abs_entry()});
        double herr = std::max({std::fabs(hs.xx - h_fd.xx), std::fabs(hs.xy - h_fd.xy),
                                std::fabs(hs.yy - h_fd.yy)}) /
                      hscale;

        DerivativeProbeResult r;
        r.probe = q;
        r.grad_error = gerr;
        r.hess_error = herr;
        r.pass = gerr <= 1e-5 && herr <= 1e-4;
        rep.max_grad_error = std::max(rep.max_grad_error, gerr);
        rep.max_hess_error = std::max(rep.max_hess_error, herr);
        rep.all_pass = rep.all_pass && r.pass;
        rep.probes.push_back(r);
    }
    return rep;
}

// --- builtins ---------------------------------------------------------------

ScalarField quadratic_saddle_field() {
    ScalarField f;
    f.descriptor = "quadratic-saddle";
    f.eval_fn = [](Vec2 q) { return q.x * q.x - q.y * q.y; };
    f.grad_fn = [](Vec2 q) { return Vec2{2.0 * q.x, -2.0 * q.y}; };
    f.hess_fn = [](Vec2) { return Mat2{2.0, 0.0, -2.0}; };
    return f;
}

ScalarField quadratic_min_field() {
    ScalarField f;
    f.descriptor = "quadratic-min";
    f.eval_fn = [](Vec2 q) { return q.x * q.x + q.y * q.y; };
    f.grad_fn = [](Vec2 q) { return Vec2{2.0 * q.x, 2.0 * q.y}; };
    f.hess_fn = [](Vec2) { return Mat2{2.0, 0.0, 2.0}; };
    return f;
}

ScalarField quadratic_max_field() {
    ScalarField f;
    f.descriptor = "quadratic-max";
    f.eval_fn = [](Vec2 q) { return -q.x * q.x - q.y * q.y; };
    f.grad_fn = [](Vec2 q) { return Vec2{-2.0 * q.x, -2.0 * q.y}; };
    f.hess_fn = [](Vec2) { return Mat2{-2.0, 0.0, -2.0}; };
    return f;
}

ScalarField rotated_saddle_field() {
    ScalarField f;
    f.descriptor = "rotated-saddle";
    f.eval_fn = [](Vec2 q) { return q.x * q.y; };
    f.grad_fn = [](Vec2 q) { return Vec2{q.y, q.x}; };
    f.hess_fn = [](Vec2) { return Mat2{0.0, 1.0, 0.0}; };
    return f;
}

ScalarField monkey_saddle_field() {
    ScalarField f;
    f.descriptor = "monkey-saddle";
    f.eval_fn = [](Vec2 q) { return q.x * q.x * q.x - 3.0 * q.x * q.y * q.y; };
    f.grad_fn = [](Vec2 q) {
        return Vec2{3.0 * (q.x * q.x - q.y * q.y), -6.0 * q.x * q.y};
    };
    f.hess_fn = [](Vec2 q) { return Mat2{6.0 * q.x, -6.0 * q.y, -6.0 * q.x}; };
    return f;
}

ScalarField quartic_saddle_field() {
    ScalarField f;
    f.descriptor = "quartic-saddle";
    f.eval_fn = [](Vec2 q) { return q.x * q.x - q.y * q.y * q.y * q.y; };
    f.grad_fn = [](Vec2 q) { return Vec2{2.0 * q.x, -4.0 * q.y * q.y * q.y}; };
    f.hess_fn = [](Vec2 q) { return Mat2{2.0, 0.0, -12.0 * q.y * q.y}; };
    return f;
}

ScalarField cusp_field() {
    ScalarField f;
    f.descriptor = "cusp";
    f.eval_fn = [](Vec2 q) { return q.y * q.y - q.x * q.x * q.x; };
    f.grad_fn = [](Vec2 q) { return Vec2{-3.0 * q.x * q.x, 2.0 * q.y}; };
    f.hess_fn = [](Vec2 q) { return Mat2{-6.0 * q.x, 0.0, 2.0}; };
    return f;
}

ScalarField double_well_field() {
    ScalarField f;
    f.descriptor = "double-well";
    f.eval_fn = [](Vec2 q) {
        double u = q.x * q.x - 1.0;
        return u * u + q.y * q.y;
    };
    f.grad_fn = [](Vec2 q) {
        return Vec2{4.0 * q.x * (q.x * q.x - 1.0), 2.0 * q.y};
    };
    f.hess_fn = [](Vec2 q) { return Mat2{12.0 * q.x * q.x - 4.0, 0.0, 2.0}; };
    return f;
}

ScalarField four_well_field() {
    ScalarField f;
    f.descriptor = "four-well";
    f.eval_fn = [](Vec2 q) {
        double u = q.x * q.x - 1.0, v = q.y * q.y - 1.0;
        return u * u + v * v;
    };
    f.grad_fn = [](Vec2 q) {
        return Vec2{4.0 * q.x * (q.x * q.x - 1.0), 4.0 * q.y * (q.y * q.y - 1.0)};
    };
    f.hess_fn = [](Vec2 q) {
        return Mat2{12.0 * q.x * q.x - 4.0, 0.0, 12.0 * q.y * q.y - 4.0};
    };
    return f;
}

ScalarField lagrange_potential(double m1, double m2, double eps) {
    if (!(m1 > 0.0) || !(m2 > 0.0) || !(eps > 0.0))
        throw BadParameterError("lagrange potential requires m1, m2, eps > 0");

    Vec2 c1{-0.5, 0.0}, c2{0.5, 0.0};

    ScalarField f;
    f.descriptor = "lagrange(m1=" + std::to_string(m1) + ",m2=" + std::to_string(m2) +
                   ",eps=" + std::to_string(eps) + ")";
    f.singular_set = {c1, c2};

    f.eval_fn = [=](Vec2 q) {
        double r1 = dist(q, c1), r2 = dist(q, c2);
        return -m1 / r1 - m2 / r2 - 0.5 * eps * q.norm2();
    };
    f.grad_fn = [=](Vec2 q) {
        Vec2 d1 = q - c1, d2 = q - c2;
        double r1 = d1.norm(), r2 = d2.norm();
        double s1 = m1 / (r1 * r1 * r1), s2 = m2 / (r2 * r2 * r2);
        return s1 * d1 + s2 * d2 - eps * q;
    };
    f.hess_fn = [=](Vec2 q) {
        Vec2 d1 = q - c1, d2 = q - c2;
        double r1 = d1.norm(), r2 = d2.norm();
        double s1 = m1 / (r1 * r1 * r1), s2 = m2 / (r2 * r2 * r2);
        double t1 = 3.0 * m1 / (r1 * r1 * r1 * r1 * r1);
        double t2 = 3.0 * m2 / (r2 * r2 * r2 * r2 * r2);
        Mat2 h{s1 + s2 - eps, 0.0, s1 + s2 - eps};
        h.xx -= t1 * d1.x * d1.x + t2 * d2.x * d2.x;
        h.yy -= t1 * d1.y * d1.y + t2 * d2.y * d2.y;
        h.xy -= t1 * d1.x * d1.y + t2 * d2.x * d2.y;
        return h;
    };
    return f;
}

ScalarField builtin_field(const std::string& name) {
    if (name == "quadratic-saddle") return quadratic_saddle_field();
    if (name == "quadratic-min") return quadratic_min_field();
    if (name == "quadratic-max") return quadratic_max_field();
    if (name == "rotated-saddle") return rotated_saddle_field();
    if (name == "monkey-saddle") return monkey_saddle_field();
    if (name == "quartic-saddle") return quartic_saddle_field();
    if (name == "cusp") return cusp_field();
    if (name == "double-well") return double_well_field();
    if (name == "four-well") return four_well_field();
    throw ConfigError("unknown builtin field: " + name);
}

std::vector<std::string> builtin_field_names() {
    return {"quadratic-saddle", "quadratic-min", "quadratic-max", "rotated-saddle",
            "monkey-saddle",    "quartic-saddle", "cusp",          "double-well",
            "four-well"};
}

}  // namespace morsehom
