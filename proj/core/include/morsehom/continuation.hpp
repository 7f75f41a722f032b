#pragma once

#include <array>
#include <vector>

#include "morsehom/chain_complex.hpp"
#include "morsehom/critical_points.hpp"
#include "morsehom/field.hpp"
#include "morsehom/flow.hpp"
#include "morsehom/gf2.hpp"

namespace morsehom {

/// Monotone switching profile: 0 for s <= -T, 1 for s >= T, 1/2 at s = 0,
/// with max derivative exactly 1/T attained at s = 0.
double homotopy_ramp(double s, double T);
double homotopy_ramp_deriv(double s, double T);

/// Interpolating family f_s = (1 - gamma(s)) f_alpha + gamma(s) f_beta, so
/// f_s == f_alpha for s <= -T and f_s == f_beta for s >= T exactly.
struct HomotopyFamily {
    ScalarField f_alpha;
    ScalarField f_beta;
    double T = 1.0;
};

/// The frozen-time field at parameter s.
ScalarField homotopy_field(const HomotopyFamily& fam, double s);

/// Velocity of the time-dependent negative gradient flow at (s, q).
Vec2 homotopy_flow_rhs(const HomotopyFamily& fam, double s, const Vec2& q);

/// Integrate the time-dependent flow dx/ds = -grad f_s(x) from x_init at
/// s_start. Forward runs classify their limit against crits_beta (gate opens
/// at s >= T); backward runs reverse the field and classify against
/// crits_alpha (gate opens at s <= -T). The homotopy correction
/// integral of (d/ds f_s)(x(s)) is accumulated into Trajectory::homotopy_term.
Trajectory integrate_nonautonomous(const HomotopyFamily& fam, const Vec2& x_init,
                                   double s_start, FlowDirection dir,
                                   const CriticalSet& crits_alpha,
                                   const CriticalSet& crits_beta, const Ball& ball,
                                   const FlowParams& params = {});

struct ChainMapOptions {
    double offset_rel = 1e-6;       // eigendirection offset, * delta
    int shrink_levels = 8;          // extra seeds at offset * 2^{-j} near the source
    int max_bisection = 48;
    double capture_fraction = 0.05; // saddle identification radius, * (2 delta)
    double escape_split = 0.25;     // exit points farther apart than this * (2 delta)
                                    // count as distinct escape verdicts
};

struct ChainMapResult {
    std::array<GF2Matrix, 3> phi;  // phi[k]: betti-graded map CM_k(alpha) -> CM_k(beta)
    int trajectories = 0;
    int crossings = 0;
    double max_energy_surplus = 0.0;  // max over counted trajectories of E - (f_a(c1) - f_b(c2))
    double energy_bound = 0.0;        // 2 * max |f_beta - f_alpha| over B_delta
    bool energy_bound_ok = true;
};

/// Count index-preserving trajectories of the time-dependent flow mod 2.
///
/// Degree 0: one forward trajectory per alpha-minimum (its forward limit is a
/// beta-minimum). Degree 2: one reversed trajectory per beta-maximum. Degree 1:
/// the unstable line of each alpha-saddle is swept (shrinking offsets near the
/// source, then the alpha-flow separatrix samples); connections to beta-saddles
/// appear as verdict changes between adjacent sweep nodes and are localized by
/// bisection until the connecting trajectory itself converges onto the target
/// saddle.
ChainMapResult chain_map(const HomotopyFamily& fam, const CriticalSet& crits_alpha,
                         const CriticalSet& crits_beta, const Ball& ball,
                         const FlowParams& params = {}, const ChainMapOptions& opts = {});

/// phi d_alpha == d_beta phi over GF(2) in every degree.
bool verify_chain_map(const std::array<GF2Matrix, 3>& phi, const ChainComplex& cx_alpha,
                      const ChainComplex& cx_beta);

}  // namespace morsehom
