#include "morsehom/local_homology.hpp"

#include <cmath>

#include "morsehom/errors.hpp"
#include "morsehom/rng.hpp"

namespace morsehom {

AnalyzeResult analyze_local_homology(const ScalarField& base, const AnalyzeOptions& opts) {
    const Ball& ball = opts.ball;
    if (ball.delta <= 0.0) throw BadParameterError("analyze: ball radius must be > 0");
    for (const Vec2& s : base.singular_set)
        if (ball.contains(s, 2.0))
            throw ValidationError("analyze: B_{2 delta} contains a field singularity");

    if (opts.require_isolation &&
        !validate_isolation(base, ball, opts.grid_n, opts.tols))
        throw ValidationError(
            "analyze: base field is not isolated at the ball center (Delta condition); "
            "shrink delta or recentre the ball");

    AnalyzeResult res;
    res.isolation_validated = opts.require_isolation;

    std::string last_failure;
    for (int attempt = 0; attempt <= opts.max_retries; ++attempt) {
        res.retries = attempt;
        uint64_t seed = derive_seed(opts.seed, static_cast<uint64_t>(attempt));

        ScalarField field = base;
        Perturbation pert;
        pert.seed = seed;
        if (opts.amplitude_rel > 0.0) {
            pert = make_perturbation(base, ball, seed, opts.amplitude_rel);
            field = perturb(base, ball, pert);
        }

        CriticalSet crits = find_critical_points(field, ball, opts.grid_n, opts.tols);
        if (crits.points.empty()) {
            last_failure = "no critical points found in B_{2 delta}";
            continue;
        }

        bool degenerate = false, outside = false, off_plateau = false;
        for (const auto& cp : crits.points) {
            degenerate = degenerate || cp.degenerate;
            outside = outside || !ball.contains(cp.location);
            off_plateau = off_plateau || !ball.contains(cp.location, 0.5);
        }
        if (outside) {
            throw LocalityViolationError(
                "analyze: a critical point of the perturbed field lies outside B_delta; "
                "shrink the perturbation amplitude");
        }
        if (off_plateau && opts.require_isolation && opts.amplitude_rel > 0.0) {
            // The cutoff confines spawned points to B_delta no matter how
            // large the amplitude gets; what breaks first is the plateau
            // regime: artifact zeros of the cutoff term appear in the annulus
            // B_delta \ B_{delta/2}. Flag that as the amplitude diagnostic.
            throw LocalityViolationError(
                "analyze: perturbed critical points spawned outside the cutoff plateau "
                "B_{delta/2}; shrink the perturbation amplitude");
        }
        if (degenerate) {
            last_failure = "perturbed field has a degenerate critical point";
            continue;
        }

        try {
            res.connections =
                count_connections(field, crits, ball, opts.flow, opts.count);
        } catch (const SaddleSaddleConnectionError& e) {
            last_failure = e.what();
            continue;
        } catch (const UndecidedBranchError& e) {
            // A stalled branch usually means the draw was nearly tangent to a
            // flat direction; a fresh direction resolves it.
            last_failure = e.what();
            continue;
        }

        res.complex = build_complex(crits, res.connections);
        if (!verify_d_squared(res.complex))
            throw NotAComplexError("analyze: boundary operators fail d^2 = 0");
        res.homology = homology(res.complex);
        res.homology.provenance.field_descriptor = base.descriptor;
        res.homology.provenance.perturbation_seed = pert.seed;
        res.homology.provenance.perturbation_amplitude = pert.amplitude;
        res.homology.provenance.grad_tol_abs = crits.tolerances.grad_tol_abs;
        res.homology.provenance.merge_tol = crits.tolerances.merge_tol;
        res.homology.provenance.degen_tol = crits.tolerances.degen_tol;
        res.crits = std::move(crits);
        res.perturbation = pert;
        res.perturbed_field = std::move(field);
        if (attempt > 0)
            res.notes.push_back("accepted after " + std::to_string(attempt) +
                                " re-perturbation(s)");
        return res;
    }
    throw RetryExhaustedError("analyze: exhausted " + std::to_string(opts.max_retries) +
                              " re-perturbations; last failure: " + last_failure);
}

}  // namespace morsehom
