#include "morsehom/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "morsehom/chain_complex.hpp"
#include "morsehom/connections.hpp"
#include "morsehom/continuation.hpp"
#include "morsehom/cubical.hpp"
#include "morsehom/errors.hpp"
#include "morsehom/lagrange.hpp"
#include "morsehom/local_homology.hpp"

namespace morsehom {

using ordered_json = nlohmann::ordered_json;

namespace {

ScalarField make_field(const FieldSpec& spec) {
    if (spec.name == "lagrange") return lagrange_potential(spec.m1, spec.m2, spec.eps);
    return builtin_field(spec.name);
}

ordered_json matrix_json(const GF2Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        std::string row;
        for (int j = 0; j < m.cols(); ++j) row += m.at(i, j) ? '1' : '0';
        rows.push_back(row);
    }
    return ordered_json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

ordered_json betti_json(const std::array<int, 3>& b) {
    return ordered_json::array({b[0], b[1], b[2]});
}

ordered_json point_json(const CriticalPoint& cp) {
    return ordered_json{{"id", cp.id},
                        {"location", {cp.location.x, cp.location.y}},
                        {"value", cp.value},
                        {"morse_index", cp.morse_index},
                        {"degenerate", cp.degenerate},
                        {"hess_eigenvalues", {cp.hess_eigenvalues[0], cp.hess_eigenvalues[1]}}};
}

ordered_json provenance_json(const RunConfig& cfg, const Provenance& p, int retries) {
    return ordered_json{{"field", p.field_descriptor},
                        {"seed", p.perturbation_seed},
                        {"amplitude", p.perturbation_amplitude},
                        {"grad_tol_abs", p.grad_tol_abs},
                        {"merge_tol", p.merge_tol},
                        {"degen_tol", p.degen_tol},
                        {"retries", retries},
                        {"config_hash", cfg.config_hash}};
}

void write_file(const std::string& out_dir, const std::string& name,
                const std::string& content) {
    if (out_dir.empty()) return;
    std::filesystem::create_directories(out_dir);
    std::ofstream out(out_dir + "/" + name, std::ios::binary);
    out << content;
}

struct WitnessChecks {
    bool energy_identity = true;
    bool locality = true;
    double max_energy_residual = 0.0;
};

WitnessChecks check_witnesses(const AnalyzeResult& res, const Ball& ball) {
    WitnessChecks wc;
    for (const auto& w : res.connections.witnesses) {
        if (w.target_id < 0) continue;
        double drop = w.energy_drop;
        double resid = std::fabs(trajectory_energy(w.trajectory) - drop);
        wc.max_energy_residual = std::max(wc.max_energy_residual, resid);
        if (resid > 1e-6 * std::fabs(drop) + 1e-9) wc.energy_identity = false;
        if (!locality_check(w.trajectory, ball)) wc.locality = false;
    }
    return wc;
}

AnalyzeOptions analyze_options(const RunConfig& cfg) {
    AnalyzeOptions a;
    a.ball = cfg.ball;
    a.grid_n = cfg.grid_n;
    a.seed = cfg.seed;
    a.amplitude_rel = cfg.amplitude_rel;
    a.max_retries = cfg.max_retries;
    a.require_isolation = !cfg.region_mode;
    a.tols = cfg.tols;
    a.flow = cfg.flow;
    return a;
}

RunOutcome run_analyze(const RunConfig& cfg, const std::string& out_dir, std::ostream& log,
                       bool verbose) {
    ScalarField base = make_field(cfg.field);
    AnalyzeResult res = analyze_local_homology(base, analyze_options(cfg));
    WitnessChecks wc = check_witnesses(res, cfg.ball);

    if (verbose)
        log << "analyze: " << res.crits.points.size() << " critical points, betti = ["
            << res.homology.betti[0] << "," << res.homology.betti[1] << ","
            << res.homology.betti[2] << "]\n";

    ordered_json rep;
    rep["command"] = "analyze";
    rep["config_hash"] = cfg.config_hash;
    rep["betti"] = betti_json(res.homology.betti);
    rep["generators"] = ordered_json::array();
    for (int k = 0; k < 3; ++k) rep["generators"].push_back(res.complex.generators[k]);
    rep["points"] = ordered_json::array();
    for (const auto& cp : res.crits.points) rep["points"].push_back(point_json(cp));
    rep["boundary"] = ordered_json{{"d1", matrix_json(res.connections.d1)},
                                   {"d2", matrix_json(res.connections.d2)}};
    rep["checks"] = ordered_json{{"d_squared", verify_d_squared(res.complex)},
                                 {"isolation_validated", res.isolation_validated},
                                 {"points_inside_delta", true},
                                 {"energy_identity", wc.energy_identity},
                                 {"locality", wc.locality},
                                 {"euler_consistent",
                                  euler_characteristic(res.complex) ==
                                      res.homology.betti[0] - res.homology.betti[1] +
                                          res.homology.betti[2]}};
    rep["witnesses"] = ordered_json::array();
    for (const auto& w : res.connections.witnesses) {
        std::string name = "witness_s" + std::to_string(w.source_id) + "_t" +
                           (w.target_id >= 0 ? std::to_string(w.target_id) : "esc") + "_" +
                           (w.sign > 0 ? "p" : "m") + "_" +
                           (w.direction == FlowDirection::forward ? "fwd" : "bwd") + ".csv";
        rep["witnesses"].push_back(ordered_json{
            {"source", w.source_id},
            {"target", w.target_id},
            {"sign", w.sign},
            {"direction", w.direction == FlowDirection::forward ? "forward" : "backward"},
            {"energy", trajectory_energy(w.trajectory)},
            {"csv", name}});
        if (cfg.write_witnesses && !out_dir.empty()) {
            std::ostringstream csv;
            write_trajectory_csv(csv, w.trajectory);
            write_file(out_dir, name, csv.str());
        }
    }
    rep["provenance"] = provenance_json(cfg, res.homology.provenance, res.retries);

    RunOutcome out;
    out.report_json = rep.dump(2) + "\n";
    write_file(out_dir, "report.json", out.report_json);
    return out;
}

RunOutcome run_lagrange(const RunConfig& cfg, const std::string& out_dir, std::ostream& log,
                        bool verbose) {
    LagrangeParams params{cfg.field.m1, cfg.field.m2, cfg.field.eps};
    LagrangeReport rep =
        theorem_a_pipeline(params, cfg.lagrange_delta, cfg.lagrange_t_steps, cfg.seed);

    if (verbose)
        log << "lagrange: theorem reproduction " << (rep.all_match ? "matched" : "FAILED")
            << " over " << rep.t_grid.size() << " homotopy steps\n";

    ordered_json j;
    j["command"] = "lagrange";
    j["config_hash"] = cfg.config_hash;
    j["params"] = ordered_json{{"m1", params.m1}, {"m2", params.m2}, {"eps", params.eps}};
    j["reference_mass"] = rep.ref_mass;
    j["t_grid"] = rep.t_grid;
    j["points"] = ordered_json::array();
    for (const auto& pr : rep.points) {
        j["points"].push_back(
            ordered_json{{"label", pr.label},
                         {"location", {pr.at_end.location.x, pr.at_end.location.y}},
                         {"morse_index", pr.at_end.morse_index},
                         {"degenerate", pr.at_end.degenerate},
                         {"classification", pr.classification},
                         {"betti_start", betti_json(pr.betti_start)},
                         {"betti_end", betti_json(pr.betti_end)},
                         {"expected", betti_json(pr.expected)},
                         {"matches_expected", pr.matches_expected},
                         {"betti_invariant", pr.betti_invariant}});
        if (!out_dir.empty()) {
            std::ostringstream csv;
            csv.precision(17);
            csv << "s,q1,q2\n";
            for (size_t k = 0; k < pr.track.size(); ++k)
                csv << rep.t_grid[k] << ',' << pr.track[k].x << ',' << pr.track[k].y << '\n';
            write_file(out_dir, pr.label + "_track.csv", csv.str());
        }
    }
    j["checks"] = ordered_json{{"census", rep.census_ok}, {"theorem_a", rep.all_match}};
    Provenance prov;
    prov.field_descriptor = "lagrange";
    prov.perturbation_seed = cfg.seed;
    j["provenance"] = provenance_json(cfg, prov, 0);

    RunOutcome out;
    out.exit_code = rep.all_match ? 0 : 3;
    out.report_json = j.dump(2) + "\n";
    write_file(out_dir, "report.json", out.report_json);
    return out;
}

RunOutcome run_continuation(const RunConfig& cfg, const std::string& out_dir,
                            std::ostream& log, bool verbose) {
    ScalarField base = make_field(cfg.field);

    AnalyzeOptions a = analyze_options(cfg);
    a.seed = cfg.seed_alpha;
    AnalyzeResult res_a = analyze_local_homology(base, a);
    AnalyzeOptions b = analyze_options(cfg);
    b.seed = cfg.seed_beta;
    AnalyzeResult res_b = analyze_local_homology(base, b);

    HomotopyFamily fam{res_a.perturbed_field, res_b.perturbed_field, cfg.homotopy_T};
    ChainMapResult cm = chain_map(fam, res_a.crits, res_b.crits, cfg.ball, cfg.flow);

    bool identity_expected = cfg.seed_alpha == cfg.seed_beta;
    bool chain_ok = verify_chain_map(cm.phi, res_a.complex, res_b.complex);
    bool betti_equal = res_a.homology.betti == res_b.homology.betti;

    bool iso = true;
    bool identity_ok = true;
    std::array<GF2Matrix, 3> induced;
    for (int k = 0; k < 3; ++k) {
        induced[k] = induced_map(cm.phi[k], res_a.complex, res_b.complex, k);
        if (induced[k].rows() != induced[k].cols() ||
            induced[k].rank() != induced[k].rows())
            iso = false;
        if (identity_expected && !(cm.phi[k] == GF2Matrix::identity(cm.phi[k].rows())))
            identity_ok = false;
    }

    bool t_stable = true;
    if (cfg.t_stability_check) {
        HomotopyFamily fam_half{res_a.perturbed_field, res_b.perturbed_field,
                                0.5 * cfg.homotopy_T};
        ChainMapResult cm_half =
            chain_map(fam_half, res_a.crits, res_b.crits, cfg.ball, cfg.flow);
        for (int k = 0; k < 3; ++k) {
            GF2Matrix ind = induced_map(cm_half.phi[k], res_a.complex, res_b.complex, k);
            if (!(ind == induced[k])) t_stable = false;
        }
    }

    if (verbose)
        log << "continuation: chain map " << (chain_ok ? "verified" : "FAILED") << ", "
            << cm.trajectories << " trajectories, " << cm.crossings << " crossings\n";

    ordered_json j;
    j["command"] = "continuation";
    j["config_hash"] = cfg.config_hash;
    j["betti_alpha"] = betti_json(res_a.homology.betti);
    j["betti_beta"] = betti_json(res_b.homology.betti);
    j["chain_map"] = ordered_json{{"phi0", matrix_json(cm.phi[0])},
                                  {"phi1", matrix_json(cm.phi[1])},
                                  {"phi2", matrix_json(cm.phi[2])}};
    j["energy"] = ordered_json{{"max_surplus", cm.max_energy_surplus},
                               {"bound", cm.energy_bound}};
    ordered_json checks{{"chain_map_identity", chain_ok},
                        {"betti_equal", betti_equal},
                        {"induced_isomorphism", iso},
                        {"energy_bound", cm.energy_bound_ok},
                        {"t_stability", t_stable}};
    if (identity_expected) checks["constant_homotopy_identity"] = identity_ok;
    j["checks"] = checks;
    j["provenance"] = provenance_json(cfg, res_a.homology.provenance, res_a.retries);

    RunOutcome out;
    bool all = chain_ok && betti_equal && iso && t_stable && (!identity_expected || identity_ok);
    out.exit_code = all ? 0 : 3;
    out.report_json = j.dump(2) + "\n";
    write_file(out_dir, "report.json", out.report_json);
    return out;
}

RunOutcome run_oracle(const RunConfig& cfg, const std::string& out_dir, std::ostream& log,
                      bool verbose) {
    ScalarField field = make_field(cfg.field);
    double window = cfg.oracle_window > 0.0 ? cfg.oracle_window : cfg.ball.delta;

    CubicalOracleOptions opts;
    opts.grid_n = cfg.oracle_grid;
    std::array<int, 3> ranks = cubical_local_homology(field, cfg.ball.center, window, opts);

    bool stable = true;
    std::array<int, 3> refined = ranks;
    if (cfg.oracle_refine_check) {
        CubicalOracleOptions fine = opts;
        fine.grid_n = 2 * opts.grid_n;
        refined = cubical_local_homology(field, cfg.ball.center, window, fine);
        stable = refined == ranks;
    }

    if (verbose)
        log << "oracle: ranks [" << ranks[0] << "," << ranks[1] << "," << ranks[2]
            << "], refinement " << (stable ? "stable" : "UNSTABLE") << "\n";

    ordered_json j;
    j["command"] = "oracle";
    j["config_hash"] = cfg.config_hash;
    j["betti"] = betti_json(ranks);
    j["grid_n"] = opts.grid_n;
    j["window"] = window;
    j["checks"] = ordered_json{{"refinement_stable", stable}};
    if (cfg.oracle_refine_check) j["betti_refined"] = betti_json(refined);
    Provenance prov;
    prov.field_descriptor = field.descriptor;
    j["provenance"] = provenance_json(cfg, prov, 0);

    RunOutcome out;
    out.exit_code = stable ? 0 : 3;
    out.report_json = j.dump(2) + "\n";
    write_file(out_dir, "report.json", out.report_json);
    return out;
}

}  // namespace

RunOutcome run_command(const RunConfig& cfg, const std::string& out_dir, std::ostream& log,
                       bool verbose) {
    try {
        switch (cfg.command) {
            case Command::analyze: return run_analyze(cfg, out_dir, log, verbose);
            case Command::lagrange: return run_lagrange(cfg, out_dir, log, verbose);
            case Command::continuation: return run_continuation(cfg, out_dir, log, verbose);
            case Command::oracle: return run_oracle(cfg, out_dir, log, verbose);
        }
        throw ConfigError("unknown command");
    } catch (const ConfigError& e) {
        log << "error: " << e.what() << "\n";
        return {1, std::string("{\"error\": \"") + e.what() + "\"}\n"};
    } catch (const BadParameterError& e) {
        log << "error: " << e.what() << "\n";
        return {1, std::string("{\"error\": \"") + e.what() + "\"}\n"};
    } catch (const RetryExhaustedError& e) {
        log << "transversality: " << e.what() << "\n";
        return {2, std::string("{\"error\": \"") + e.what() + "\"}\n"};
    } catch (const TransversalityFailureError& e) {
        log << "transversality: " << e.what() << "\n";
        return {2, std::string("{\"error\": \"") + e.what() + "\"}\n"};
    } catch (const Error& e) {
        log << "validation: " << e.what() << "\n";
        return {3, std::string("{\"error\": \"") + e.what() + "\"}\n"};
    }
}

}  // namespace morsehom
