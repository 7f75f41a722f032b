#pragma once

#include <map>
#include <utility>
#include <vector>

#include "morsehom/critical_points.hpp"
#include "morsehom/flow.hpp"
#include "morsehom/gf2.hpp"

namespace morsehom {

/// One branch shot from a saddle: forward along the unstable eigendirection
/// or backward along the stable one.
struct BranchWitness {
    int source_id = -1;         // the saddle the branch was shot from
    int target_id = -1;         // critical point reached (-1 if escaped)
    int sign = +1;              // which side of the eigendirection
    FlowDirection direction = FlowDirection::forward;
    Trajectory trajectory;
    double energy_drop = 0.0;   // f(high end) - f(low end) for converged branches
};

/// GF(2) connection counts between adjacent Morse indices.
/// d1(i, j): parity of flow lines saddle_j -> min_i   (shape n0 x n1)
/// d2(i, j): parity of flow lines max_j -> saddle_i   (shape n1 x n2)
/// Row/column order follows ids_of_index() of the critical set.
struct ConnectionMatrix {
    GF2Matrix d1, d2;
    std::vector<int> ids0, ids1, ids2;
    std::vector<BranchWitness> witnesses;
    int escaped_branches = 0;

    /// Raw (un-reduced) arrival tallies keyed by (source id, target id).
    std::map<std::pair<int, int>, int> raw_tallies;
};

/// Seed pair saddle.location +- offset * v where v is the unit eigenvector of
/// the negative (unstable_*) or positive (stable_*) Hessian eigenvalue.
/// Throws DegeneratePointError on degenerate input.
std::pair<Vec2, Vec2> unstable_branch_seeds(const CriticalPoint& saddle, double offset);
std::pair<Vec2, Vec2> stable_branch_seeds(const CriticalPoint& saddle, double offset);

struct CountOptions {
    double offset_rel = 1e-6;        // shooting offset, * delta
    bool verify_offset_halving = true;  // recount at offset/2, demand equal matrices
};

/// Count connections mod 2 by shooting the four separatrix branches of every
/// index-1 point. Forward branches converging at an index-0 point feed d1;
/// backward branches converging at an index-2 point feed d2. Escaped branches
/// are recorded and contribute nothing.
///
/// Throws SaddleSaddleConnectionError when a branch converges to another
/// index-1 point (transversality failure; caller re-perturbs),
/// LocalityViolationError when a converged branch left B_{2 delta} en route,
/// UndecidedBranchError when a branch exhausts the flow budget.
ConnectionMatrix count_connections(const ScalarField& f, const CriticalSet& crits,
                                   const Ball& ball, const FlowParams& params = {},
                                   const CountOptions& opts = {});

}  // namespace morsehom
