#include <doctest.h>

#include <sstream>

#include "morsehom/config.hpp"
#include "morsehom/errors.hpp"
#include "morsehom/runner.hpp"

using namespace morsehom;

namespace {

RunOutcome run_text(const std::string& text, Command cmd,
                    std::optional<uint64_t> seed = std::nullopt) {
    RunConfig cfg = parse_config_text(text, cmd, seed);
    std::ostringstream log;
    return run_command(cfg, "", log, false);
}

const char* kSaddleCfg = R"({
  "field": {"name": "quadratic-saddle"},
  "ball": {"center": [0.0, 0.0], "delta": 0.5},
  "perturbation": {"amplitude_rel": 1e-3, "seed": 1}
})";

}  // namespace

TEST_CASE("config parsing: defaults, overrides, diagnostics") {
    RunConfig cfg = parse_config_text(kSaddleCfg, Command::analyze, std::nullopt);
    CHECK(cfg.field.name == "quadratic-saddle");
    CHECK(cfg.ball.delta == 0.5);
    CHECK(cfg.seed == 1);
    CHECK(cfg.grid_n == 24);
    CHECK(!cfg.config_hash.empty());

    // The seed override changes the hash (it is part of the effective config).
    RunConfig cfg2 = parse_config_text(kSaddleCfg, Command::analyze, 42);
    CHECK(cfg2.seed == 42);
    CHECK(cfg2.config_hash != cfg.config_hash);

    // Unknown keys are rejected with their path.
    CHECK_THROWS_WITH_AS(
        parse_config_text(R"({"field": {"name": "x", "mass": 1}})", Command::analyze,
                          std::nullopt),
        "unknown config key \"field.mass\"", ConfigError);
    CHECK_THROWS_AS(
        parse_config_text(R"({"tolerances": {"grad_tol": -1e-9}})", Command::analyze,
                          std::nullopt),
        ConfigError);

    // Malformed JSON reports line and column.
    try {
        parse_config_text("{\n  \"field\": {\n", Command::analyze, std::nullopt);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    // A config pinned to another command is refused.
    CHECK_THROWS_AS(
        parse_config_text(R"({"command": "oracle"})", Command::analyze, std::nullopt),
        ConfigError);
}

TEST_CASE("analyze command: quadratic saddle reports betti [0,1,0]") {
    RunOutcome out = run_text(kSaddleCfg, Command::analyze);
    CHECK(out.exit_code == 0);
    CHECK(out.report_json.find("\"betti\": [\n    0,\n    1,\n    0\n  ]") !=
          std::string::npos);
    CHECK(out.report_json.find("\"d_squared\": true") != std::string::npos);
}

TEST_CASE("analyze command: double-well region reports betti [1,0,0]") {
    RunOutcome out = run_text(R"({
      "field": {"name": "double-well"},
      "ball": {"delta": 1.5},
      "mode": "region",
      "perturbation": {"seed": 5}
    })", Command::analyze);
    CHECK(out.exit_code == 0);
    CHECK(out.report_json.find("\"betti\": [\n    1,\n    0,\n    0\n  ]") !=
          std::string::npos);
}

TEST_CASE("analyze command: monkey saddle reports betti [0,2,0]") {
    RunOutcome out = run_text(R"({
      "field": {"name": "monkey-saddle"},
      "ball": {"delta": 0.5},
      "perturbation": {"seed": 7}
    })", Command::analyze);
    CHECK(out.exit_code == 0);
    CHECK(out.report_json.find("\"betti\": [\n    0,\n    2,\n    0\n  ]") !=
          std::string::npos);
}

TEST_CASE("reports are byte-identical across reruns with the same config") {
    RunOutcome a = run_text(kSaddleCfg, Command::analyze);
    RunOutcome b = run_text(kSaddleCfg, Command::analyze);
    CHECK(a.report_json == b.report_json);

    RunOutcome c = run_text(kSaddleCfg, Command::analyze, 99);
    CHECK(a.report_json != c.report_json);  // different seed, different provenance
}

TEST_CASE("oracle command with refinement check") {
    RunOutcome out = run_text(R"({
      "field": {"name": "monkey-saddle"},
      "ball": {"delta": 0.5},
      "oracle": {"grid_n": 64, "refine_check": true}
    })", Command::oracle);
    CHECK(out.exit_code == 0);
    CHECK(out.report_json.find("\"betti\": [\n    0,\n    2,\n    0\n  ]") !=
          std::string::npos);
    CHECK(out.report_json.find("\"refinement_stable\": true") != std::string::npos);
}

TEST_CASE("continuation command: constant homotopy yields the identity") {
    RunOutcome out = run_text(R"({
      "field": {"name": "double-well"},
      "ball": {"delta": 1.5},
      "mode": "region",
      "continuation": {"T": 1.0, "seed_alpha": 5, "seed_beta": 5, "t_stability_check": false}
    })", Command::continuation);
    CHECK(out.exit_code == 0);
    CHECK(out.report_json.find("\"constant_homotopy_identity\": true") != std::string::npos);
    CHECK(out.report_json.find("\"chain_map_identity\": true") != std::string::npos);
}

TEST_CASE("exit codes: bad parameters 1, retry exhaustion 2, validation failures 3") {
    RunOutcome bad = run_text(R"({
      "lagrange": {"m1": -1.0, "m2": 0.5, "eps": 1.0}
    })", Command::lagrange);
    CHECK(bad.exit_code == 1);

    // Amplitude zero on a degenerate field: every attempt re-finds the same
    // degenerate point, so the re-perturbation budget runs out.
    RunOutcome retry = run_text(R"({
      "field": {"name": "quartic-saddle"},
      "ball": {"delta": 0.5},
      "perturbation": {"amplitude_rel": 0.0},
      "max_retries": 2
    })", Command::analyze);
    CHECK(retry.exit_code == 2);

    // Isolation requirement fails for a ball with several base critical points.
    RunOutcome iso = run_text(R"({
      "field": {"name": "double-well"},
      "ball": {"delta": 1.5}
    })", Command::analyze);
    CHECK(iso.exit_code == 3);
}
