#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "morsehom/critical_points.hpp"
#include "morsehom/flow.hpp"
#include "morsehom/geometry.hpp"

namespace morsehom {

enum class Command { analyze, lagrange, continuation, oracle };

std::string command_name(Command c);

struct FieldSpec {
    std::string name = "quadratic-saddle";  // builtin name or "lagrange"
    double m1 = 0.5, m2 = 0.5, eps = 1.0;   // lagrange parameters
};

struct RunConfig {
    Command command = Command::analyze;

    FieldSpec field;
    Ball ball{Vec2{0.0, 0.0}, 0.5};
    bool region_mode = false;  // skip the base-isolation requirement

    uint64_t seed = 1;
    double amplitude_rel = 1e-3;
    int grid_n = 24;
    int max_retries = 5;

    ToleranceSet tols;
    FlowParams flow;

    // continuation
    double homotopy_T = 1.0;
    uint64_t seed_alpha = 1;
    uint64_t seed_beta = 2;
    bool t_stability_check = true;

    // lagrange
    double lagrange_delta = 0.05;
    int lagrange_t_steps = 8;

    // oracle
    int oracle_grid = 128;
    double oracle_window = 0.0;  // 0: default to ball.delta
    bool oracle_refine_check = true;

    bool write_witnesses = true;

    std::string config_hash;  // FNV-1a of the canonical effective config
};

/// Parse a JSON run config. Unknown keys are rejected with their path;
/// malformed JSON is reported with line/column. CLI overrides (seed) are
/// folded in before the config hash is taken.
RunConfig parse_config_text(const std::string& text, Command command,
                            std::optional<uint64_t> seed_override);

RunConfig parse_config_file(const std::string& path, Command command,
                            std::optional<uint64_t> seed_override);

}  // namespace morsehom
