#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morsehom/chain_complex.hpp"
#include "morsehom/connections.hpp"
#include "morsehom/critical_points.hpp"
#include "morsehom/field.hpp"
#include "morsehom/flow.hpp"

namespace morsehom {

struct AnalyzeOptions {
    Ball ball;
    int grid_n = 24;
    uint64_t seed = 1;
    double amplitude_rel = 1e-3;   // 0 disables the perturbation stage
    int max_retries = 5;           // fresh seeds on transversality / degeneracy trouble
    bool require_isolation = true; // demand a unique base critical point at the center
    ToleranceSet tols;
    FlowParams flow;
    CountOptions count;
};

struct AnalyzeResult {
    CriticalSet crits;          // of the perturbed field
    ConnectionMatrix connections;
    ChainComplex complex;
    HomologyResult homology;
    Perturbation perturbation;  // the accepted draw
    ScalarField perturbed_field;
    int retries = 0;
    bool isolation_validated = false;
    std::vector<std::string> notes;
};

/// End-to-end local Morse homology of a field over a ball:
/// perturb -> locate critical points -> count connections -> complex ->
/// homology. Retries with fresh perturbation seeds on degenerate spawns and
/// saddle-saddle hits (at most max_retries, then RetryExhaustedError).
///
/// With require_isolation the base field must have exactly one critical point
/// in B_{2 delta}, at the center (ValidationError otherwise); configurations
/// analyzing a multi-point region opt out.
AnalyzeResult analyze_local_homology(const ScalarField& base, const AnalyzeOptions& opts);

}  // namespace morsehom
