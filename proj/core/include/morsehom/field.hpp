#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "morsehom/errors.hpp"
#include "morsehom/geometry.hpp"

namespace morsehom {

/// A smooth planar scalar field with analytic first and second derivatives.
/// Fields ship their own derivatives; nothing here differentiates numerically.
struct ScalarField {
    std::function<double(Vec2)> eval_fn;
    std::function<Vec2(Vec2)> grad_fn;
    std::function<Mat2(Vec2)> hess_fn;
    std::vector<Vec2> singular_set;
    std::string descriptor;

    double eval(const Vec2& q) const;
    Vec2 grad(const Vec2& q) const;
    Mat2 hessian(const Vec2& q) const;

    /// Distance from q to the nearest singularity (infinity if none).
    double singular_distance(const Vec2& q) const;
    /// Throws SingularPointError if q is within tol of a singularity.
    void require_regular(const Vec2& q, double tol = 1e-12) const;
};

/// C-infinity cutoff profile: chi(t) = 1 for t <= 1/2, chi(t) = 0 for t >= 1,
/// built from the standard exp(-1/t) transition.
struct BumpProfile {
    double value(double t) const;
    double deriv(double t) const;
    double second_deriv(double t) const;
};

struct Perturbation {
    double amplitude = 0.0;   // lambda >= 0
    Vec2 direction{1.0, 0.0}; // unit vector a
    uint64_t seed = 0;        // provenance of the direction draw
};

/// Max |grad f| over a 32x32 grid covering B_delta; the tolerance unit used
/// throughout (Newton convergence, flow termination, amplitude defaults).
double gradient_scale(const ScalarField& f, const Ball& ball);
/// Max Hessian entry magnitude over the same grid.
double hessian_scale(const ScalarField& f, const Ball& ball);

/// Draw a unit direction from the seed and size the amplitude as
/// rel_amplitude * gradient_scale.
Perturbation make_perturbation(const ScalarField& base, const Ball& ball,
                               uint64_t seed, double rel_amplitude = 1e-3);

/// f(q) = base(q) + lambda * chi(|q - x0| / delta) * <a, q - x0>.
/// Exactly equal to base outside B_delta; derivatives updated analytically.
ScalarField perturb(const ScalarField& base, const Ball& ball, const Perturbation& p);

struct DerivativeProbeResult {
    Vec2 probe;
    double grad_error = 0.0;  // max relative error, analytic grad vs FD(eval)
    double hess_error = 0.0;  // max relative error, analytic hess vs FD(grad)
    bool pass = true;
};

struct DerivativeReport {
    std::vector<DerivativeProbeResult> probes;
    double max_grad_error = 0.0;
    double max_hess_error = 0.0;
    bool all_pass = true;
};

/// Central finite-difference cross-check of the shipped derivatives.
/// Failures above 1e-5 (grad) / 1e-4 (hess) are flagged, never thrown.
DerivativeReport check_derivatives(const ScalarField& f, const std::vector<Vec2>& probes,
                                   double step = 1e-5);

// --- builtin fields ------------------------------------------------------

ScalarField quadratic_saddle_field();        // x^2 - y^2
ScalarField quadratic_min_field();           // x^2 + y^2
ScalarField quadratic_max_field();           // -x^2 - y^2
ScalarField rotated_saddle_field();          // x*y
ScalarField monkey_saddle_field();           // x^3 - 3 x y^2
ScalarField quartic_saddle_field();          // x^2 - y^4 (degenerate at 0)
ScalarField cusp_field();                    // y^2 - x^3 (vanishing local homology)
ScalarField double_well_field();             // (x^2-1)^2 + y^2
ScalarField four_well_field();               // (x^2-1)^2 + (y^2-1)^2

/// Two-fixed-centers-plus-spring potential, analyzed with the sign convention
/// V = -m1/r1 - m2/r2 - (eps/2)|q|^2 so the off-axis equilibria are maxima.
/// Singular at (+-1/2, 0). Throws BadParameterError unless all inputs > 0.
ScalarField lagrange_potential(double m1, double m2, double eps);

/// Builtin registry used by the CLI; throws ConfigError for unknown names.
ScalarField builtin_field(const std::string& name);
std::vector<std::string> builtin_field_names();

}  // namespace morsehom
