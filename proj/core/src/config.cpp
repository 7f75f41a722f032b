#include "morsehom/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "morsehom/errors.hpp"

namespace morsehom {

using nlohmann::json;

std::string command_name(Command c) {
    switch (c) {
        case Command::analyze: return "analyze";
        case Command::lagrange: return "lagrange";
        case Command::continuation: return "continuation";
        case Command::oracle: return "oracle";
    }
    return "?";
}

namespace {

[[noreturn]] void fail_at_offset(const std::string& text, size_t byte, const std::string& what) {
    size_t line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + what);
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw ConfigError("unknown config key \"" + path + it.key() + "\"");
    }
}

double positive(const json& v, const std::string& path) {
    double d = v.get<double>();
    if (!(d > 0.0)) throw ConfigError("config key \"" + path + "\" must be positive");
    return d;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace

namespace {

RunConfig extract_config(json& root, Command command, std::optional<uint64_t> seed_override);

}  // namespace

RunConfig parse_config_text(const std::string& text, Command command,
                            std::optional<uint64_t> seed_override) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail_at_offset(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be a JSON object");
    try {
        return extract_config(root, command, seed_override);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config value error: ") + e.what());
    }
}

namespace {

RunConfig extract_config(json& root, Command command,
                         std::optional<uint64_t> seed_override) {
    RunConfig cfg;
    cfg.command = command;

    reject_unknown(root,
                   {"command", "field", "ball", "mode", "seed", "perturbation", "grid_n",
                    "max_retries", "tolerances", "flow", "continuation", "lagrange", "oracle",
                    "output"},
                   "");

    if (root.contains("command")) {
        std::string c = root["command"].get<std::string>();
        if (c != command_name(command))
            throw ConfigError("config command \"" + c + "\" does not match subcommand \"" +
                              command_name(command) + "\"");
    }

    if (root.contains("field")) {
        const json& f = root["field"];
        reject_unknown(f, {"name", "m1", "m2", "eps"}, "field.");
        cfg.field.name = f.at("name").get<std::string>();
        if (f.contains("m1")) cfg.field.m1 = positive(f["m1"], "field.m1");
        if (f.contains("m2")) cfg.field.m2 = positive(f["m2"], "field.m2");
        if (f.contains("eps")) cfg.field.eps = positive(f["eps"], "field.eps");
    }

    if (root.contains("ball")) {
        const json& b = root["ball"];
        reject_unknown(b, {"center", "delta"}, "ball.");
        if (b.contains("center")) {
            auto c = b["center"].get<std::vector<double>>();
            if (c.size() != 2) throw ConfigError("ball.center must be [x, y]");
            cfg.ball.center = {c[0], c[1]};
        }
        if (b.contains("delta")) cfg.ball.delta = positive(b["delta"], "ball.delta");
    }

    if (root.contains("mode")) {
        std::string m = root["mode"].get<std::string>();
        if (m == "region") cfg.region_mode = true;
        else if (m == "local") cfg.region_mode = false;
        else throw ConfigError("mode must be \"local\" or \"region\"");
    }

    if (root.contains("seed")) cfg.seed = root["seed"].get<uint64_t>();

    if (root.contains("perturbation")) {
        const json& p = root["perturbation"];
        reject_unknown(p, {"amplitude_rel", "seed"}, "perturbation.");
        if (p.contains("amplitude_rel")) {
            cfg.amplitude_rel = p["amplitude_rel"].get<double>();
            if (cfg.amplitude_rel < 0.0)
                throw ConfigError("perturbation.amplitude_rel must be >= 0");
        }
        if (p.contains("seed")) cfg.seed = p["seed"].get<uint64_t>();
    }

    if (root.contains("grid_n")) {
        cfg.grid_n = root["grid_n"].get<int>();
        if (cfg.grid_n < 8) throw ConfigError("grid_n must be >= 8");
    }
    if (root.contains("max_retries")) cfg.max_retries = root["max_retries"].get<int>();

    if (root.contains("tolerances")) {
        const json& t = root["tolerances"];
        reject_unknown(t, {"grad_tol", "merge_tol_rel", "degen_tol_rel"}, "tolerances.");
        if (t.contains("grad_tol")) cfg.tols.grad_tol = positive(t["grad_tol"], "tolerances.grad_tol");
        if (t.contains("merge_tol_rel"))
            cfg.tols.merge_tol_rel = positive(t["merge_tol_rel"], "tolerances.merge_tol_rel");
        if (t.contains("degen_tol_rel"))
            cfg.tols.degen_tol_rel = positive(t["degen_tol_rel"], "tolerances.degen_tol_rel");
    }

    if (root.contains("flow")) {
        const json& f = root["flow"];
        reject_unknown(f,
                       {"rel_tol", "abs_tol", "max_time", "max_step", "converge_radius_rel",
                        "converge_grad_factor", "escape_margin"},
                       "flow.");
        if (f.contains("rel_tol")) cfg.flow.rel_tol = positive(f["rel_tol"], "flow.rel_tol");
        if (f.contains("abs_tol")) cfg.flow.abs_tol = positive(f["abs_tol"], "flow.abs_tol");
        if (f.contains("max_time")) cfg.flow.max_time = positive(f["max_time"], "flow.max_time");
        if (f.contains("max_step")) cfg.flow.max_step = positive(f["max_step"], "flow.max_step");
        if (f.contains("converge_radius_rel"))
            cfg.flow.converge_radius_rel = positive(f["converge_radius_rel"], "flow.converge_radius_rel");
        if (f.contains("converge_grad_factor"))
            cfg.flow.converge_grad_factor =
                positive(f["converge_grad_factor"], "flow.converge_grad_factor");
        if (f.contains("escape_margin"))
            cfg.flow.escape_margin = positive(f["escape_margin"], "flow.escape_margin");
    }

    if (root.contains("continuation")) {
        const json& c = root["continuation"];
        reject_unknown(c, {"T", "seed_alpha", "seed_beta", "t_stability_check"}, "continuation.");
        if (c.contains("T")) cfg.homotopy_T = positive(c["T"], "continuation.T");
        if (c.contains("seed_alpha")) cfg.seed_alpha = c["seed_alpha"].get<uint64_t>();
        if (c.contains("seed_beta")) cfg.seed_beta = c["seed_beta"].get<uint64_t>();
        if (c.contains("t_stability_check"))
            cfg.t_stability_check = c["t_stability_check"].get<bool>();
    }

    if (root.contains("lagrange")) {
        const json& l = root["lagrange"];
        reject_unknown(l, {"m1", "m2", "eps", "delta", "t_steps"}, "lagrange.");
        if (l.contains("m1")) cfg.field.m1 = l["m1"].get<double>();
        if (l.contains("m2")) cfg.field.m2 = l["m2"].get<double>();
        if (l.contains("eps")) cfg.field.eps = l["eps"].get<double>();
        if (l.contains("delta")) cfg.lagrange_delta = positive(l["delta"], "lagrange.delta");
        if (l.contains("t_steps")) {
            cfg.lagrange_t_steps = l["t_steps"].get<int>();
            if (cfg.lagrange_t_steps < 2) throw ConfigError("lagrange.t_steps must be >= 2");
        }
    }

    if (root.contains("oracle")) {
        const json& o = root["oracle"];
        reject_unknown(o, {"grid_n", "window", "refine_check"}, "oracle.");
        if (o.contains("grid_n")) {
            cfg.oracle_grid = o["grid_n"].get<int>();
            if (cfg.oracle_grid < 16) throw ConfigError("oracle.grid_n must be >= 16");
        }
        if (o.contains("window")) cfg.oracle_window = positive(o["window"], "oracle.window");
        if (o.contains("refine_check")) cfg.oracle_refine_check = o["refine_check"].get<bool>();
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        reject_unknown(o, {"write_witnesses"}, "output.");
        if (o.contains("write_witnesses")) cfg.write_witnesses = o["write_witnesses"].get<bool>();
    }

    if (seed_override) {
        cfg.seed = *seed_override;
        root["seed"] = *seed_override;  // the hash covers the effective config
    }
    root["command"] = command_name(command);
    cfg.config_hash = hex64(fnv1a(root.dump()));
    return cfg;
}

}  // namespace

RunConfig parse_config_file(const std::string& path, Command command,
                            std::optional<uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), command, seed_override);
}

}  // namespace morsehom
