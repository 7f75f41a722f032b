#include "morsehom/connections.hpp"

#include <algorithm>
#include <cmath>

#include "morsehom/errors.hpp"

namespace morsehom {

namespace {

std::pair<Vec2, Vec2> branch_seeds(const CriticalPoint& saddle, double offset,
                                   bool unstable) {
    if (saddle.degenerate)
        throw DegeneratePointError("branch seeds requested at a degenerate point");
    if (saddle.morse_index != 1)
        throw BadParameterError("branch seeds requested at a non-saddle point");
    // Eigenvalues are ascending: [0] negative (unstable), [1] positive (stable).
    const Vec2& v = unstable ? saddle.hess_eigenvectors[0] : saddle.hess_eigenvectors[1];
    return {saddle.location + offset * v, saddle.location - offset * v};
}

}  // namespace

std::pair<Vec2, Vec2> unstable_branch_seeds(const CriticalPoint& saddle, double offset) {
    return branch_seeds(saddle, offset, true);
}

std::pair<Vec2, Vec2> stable_branch_seeds(const CriticalPoint& saddle, double offset) {
    return branch_seeds(saddle, offset, false);
}

namespace {

struct CountPass {
    GF2Matrix d1, d2;
    std::vector<BranchWitness> witnesses;
    std::map<std::pair<int, int>, int> raw;
    int escaped = 0;
};

CountPass count_once(const ScalarField& f, const CriticalSet& crits, const Ball& ball,
                     const FlowParams& params, double offset,
                     const std::vector<int>& ids0, const std::vector<int>& ids1,
                     const std::vector<int>& ids2) {
    CountPass pass;
    pass.d1 = GF2Matrix(static_cast<int>(ids0.size()), static_cast<int>(ids1.size()));
    pass.d2 = GF2Matrix(static_cast<int>(ids1.size()), static_cast<int>(ids2.size()));

    auto pos_of = [](const std::vector<int>& ids, int id) {
        return static_cast<int>(std::find(ids.begin(), ids.end(), id) - ids.begin());
    };

    // spos is the saddle's position: a column of d1 and a row of d2.
    for (int spos = 0; spos < static_cast<int>(ids1.size()); ++spos) {
        const CriticalPoint& saddle = *crits.by_id(ids1[spos]);

        for (FlowDirection dir : {FlowDirection::forward, FlowDirection::backward}) {
            bool unstable = dir == FlowDirection::forward;
            auto seeds = branch_seeds(saddle, offset, unstable);
            for (int sgn : {+1, -1}) {
                Vec2 seed = sgn > 0 ? seeds.first : seeds.second;
                Trajectory traj = integrate_flow(f, seed, dir, crits, ball, params);

                BranchWitness w;
                w.source_id = saddle.id;
                w.sign = sgn;
                w.direction = dir;

                if (traj.limit.kind == TrajectoryLimit::Kind::undecided) {
                    throw UndecidedBranchError(
                        "branch from saddle id " + std::to_string(saddle.id) +
                        " undecided; raise max_time or re-perturb");
                }
                if (traj.limit.kind == TrajectoryLimit::Kind::escaped) {
                    ++pass.escaped;
                    w.target_id = -1;
                    w.trajectory = std::move(traj);
                    pass.witnesses.push_back(std::move(w));
                    continue;
                }

                int tid = traj.limit.critical_point_id;
                const CriticalPoint& target = *crits.by_id(tid);
                if (tid == saddle.id) {
                    // A branch relaxing back onto its own saddle means the
                    // offset left the linear regime; treat as transversality
                    // trouble and let the caller re-perturb.
                    throw SaddleSaddleConnectionError(
                        "branch returned to its source saddle id " + std::to_string(tid));
                }
                if (target.morse_index == 1) {
                    throw SaddleSaddleConnectionError(
                        "saddle-saddle connection " + std::to_string(saddle.id) + " -> " +
                        std::to_string(tid) + "; re-perturb with a fresh seed");
                }
                bool expected_index = unstable ? (target.morse_index == 0)
                                               : (target.morse_index == 2);
                if (!expected_index) {
                    // Forward flow cannot terminate at a maximum (f decreases)
                    // and backward flow cannot terminate at a minimum; reaching
                    // one indicates a broken census.
                    throw SaddleSaddleConnectionError(
                        "branch converged at an index-" + std::to_string(target.morse_index) +
                        " point in the " + (unstable ? "forward" : "backward") + " direction");
                }
                if (!locality_check(traj, ball)) {
                    throw LocalityViolationError(
                        "converged branch left B_{2 delta} en route (saddle id " +
                        std::to_string(saddle.id) + "); shrink the perturbation amplitude");
                }

                w.target_id = tid;
                w.energy_drop = unstable ? saddle.value - target.value
                                         : target.value - saddle.value;
                w.trajectory = std::move(traj);
                pass.raw[{saddle.id, tid}] += 1;
                if (unstable) {
                    pass.d1.flip(pos_of(ids0, tid), spos);
                } else {
                    pass.d2.flip(spos, pos_of(ids2, tid));
                }
                pass.witnesses.push_back(std::move(w));
            }
        }
    }
    return pass;
}

}  // namespace

ConnectionMatrix count_connections(const ScalarField& f, const CriticalSet& crits,
                                   const Ball& ball, const FlowParams& params,
                                   const CountOptions& opts) {
    for (const auto& cp : crits.points)
        if (cp.degenerate)
            throw DegeneratePointError("count_connections: degenerate critical point id " +
                                       std::to_string(cp.id));

    ConnectionMatrix out;
    out.ids0 = crits.ids_of_index(0);
    out.ids1 = crits.ids_of_index(1);
    out.ids2 = crits.ids_of_index(2);

    double offset = opts.offset_rel * ball.delta;
    CountPass pass = count_once(f, crits, ball, params, offset, out.ids0, out.ids1, out.ids2);

    if (opts.verify_offset_halving && !out.ids1.empty()) {
        CountPass half =
            count_once(f, crits, ball, params, 0.5 * offset, out.ids0, out.ids1, out.ids2);
        if (!(half.d1 == pass.d1) || !(half.d2 == pass.d2))
            throw TransversalityFailureError(
                "connection counts changed under offset halving; shooting offset is not in "
                "the linearization regime");
    }

    out.d1 = std::move(pass.d1);
    out.d2 = std::move(pass.d2);
    out.witnesses = std::move(pass.witnesses);
    out.raw_tallies = std::move(pass.raw);
    out.escaped_branches = pass.escaped;
    return out;
}

}  // namespace morsehom
