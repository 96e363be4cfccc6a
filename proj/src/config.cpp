#include "cll/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cll/errors.hpp"

namespace cll {

using nlohmann::json;

ShearProfile make_profile(const ProfileSpec& spec) {
    if (spec.kind == "quadratic_well") return ShearProfile::quadratic_well();
    if (spec.kind == "quartic_perturbation") return ShearProfile::quartic_perturbation();
    if (spec.kind == "cosine_well") return ShearProfile::cosine_well();
    if (spec.kind == "custom") {
        if (spec.coeffs.empty()) throw ConfigError("custom profile requires 'coeffs'");
        return ShearProfile::polynomial(spec.center, spec.coeffs);
    }
    throw ConfigError("unknown profile kind '" + spec.kind + "'");
}

namespace {

const std::set<std::string> kTopKeys = {
    "experiment", "profile", "k", "grid_n", "eps_schedule", "lambda_panels", "time",
    "omega0", "output_dir", "seed", "jobs", "assert", "plots", "spectrum", "lap",
    "rates", "depletion", "free_transport", "skip_audit", "lambda_grid"};

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("JSON parse failure: ") + e.what());
    }
    check_keys(j, kTopKeys, "config");
    RunConfig c;
    try {
        if (j.contains("experiment")) c.experiment = j["experiment"].get<std::string>();
        if (j.contains("profile")) {
            const auto& p = j["profile"];
            check_keys(p, {"kind", "center", "coeffs"}, "profile");
            if (p.contains("kind")) c.profile.kind = p["kind"].get<std::string>();
            if (p.contains("center")) c.profile.center = p["center"].get<double>();
            if (p.contains("coeffs")) c.profile.coeffs = p["coeffs"].get<std::vector<double>>();
        }
        if (j.contains("k")) {
            if (j["k"].is_array()) c.k = j["k"].get<std::vector<int>>();
            else c.k = {j["k"].get<int>()};
        }
        if (j.contains("grid_n")) c.grid_n = j["grid_n"].get<int>();
        if (j.contains("eps_schedule")) c.eps_schedule = j["eps_schedule"].get<std::vector<double>>();
        if (j.contains("lambda_panels")) {
            const auto& lp = j["lambda_panels"];
            check_keys(lp, {"base", "min_width_rel"}, "lambda_panels");
            if (lp.contains("base")) c.lambda_base_panels = lp["base"].get<int>();
            if (lp.contains("min_width_rel")) c.lambda_min_width_rel = lp["min_width_rel"].get<double>();
        }
        if (j.contains("time")) {
            const auto& t = j["time"];
            check_keys(t, {"t_end", "dt", "snapshot_dt", "times"}, "time");
            if (t.contains("t_end")) c.t_end = t["t_end"].get<double>();
            if (t.contains("dt")) c.dt = t["dt"].get<double>();
            if (t.contains("snapshot_dt")) c.snapshot_dt = t["snapshot_dt"].get<double>();
            if (t.contains("times")) c.times = t["times"].get<std::vector<double>>();
        }
        if (j.contains("omega0")) {
            if (j["omega0"].is_object()) {
                check_keys(j["omega0"], {"kind", "path"}, "omega0");
                if (j["omega0"].contains("kind")) c.omega0 = j["omega0"]["kind"].get<std::string>();
                if (j["omega0"].contains("path")) c.omega0_file = j["omega0"]["path"].get<std::string>();
            } else {
                c.omega0 = j["omega0"].get<std::string>();
            }
        }
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
        if (j.contains("assert")) c.assert_mode = j["assert"].get<bool>();
        if (j.contains("plots")) c.plots = j["plots"].get<bool>();
        if (j.contains("spectrum")) {
            check_keys(j["spectrum"], {"k_max"}, "spectrum");
            if (j["spectrum"].contains("k_max")) c.k_max = j["spectrum"]["k_max"].get<int>();
        }
        if (j.contains("lambda_grid")) c.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
        if (j.contains("lap")) {
            check_keys(j["lap"], {"norm_flavor", "bracket_reading"}, "lap");
            if (j["lap"].contains("norm_flavor")) c.norm_flavor = j["lap"]["norm_flavor"].get<std::string>();
            if (j["lap"].contains("bracket_reading"))
                c.bracket_reading = j["lap"]["bracket_reading"].get<std::string>();
        }
        if (j.contains("rates")) {
            check_keys(j["rates"], {"t0", "t1", "max_psi", "max_ux", "max_uy"}, "rates");
            const auto& r = j["rates"];
            if (r.contains("t0")) c.rate_t0 = r["t0"].get<double>();
            if (r.contains("t1")) c.rate_t1 = r["t1"].get<double>();
            if (r.contains("max_psi")) c.rate_max_psi = r["max_psi"].get<double>();
            if (r.contains("max_ux")) c.rate_max_ux = r["max_ux"].get<double>();
            if (r.contains("max_uy")) c.rate_max_uy = r["max_uy"].get<double>();
        }
        if (j.contains("depletion")) {
            check_keys(j["depletion"], {"t0", "y_lo", "y_hi", "min_alpha", "min_beta"}, "depletion");
            const auto& d = j["depletion"];
            if (d.contains("t0")) c.depl_t0 = d["t0"].get<double>();
            if (d.contains("y_lo")) c.depl_y_lo = d["y_lo"].get<double>();
            if (d.contains("y_hi")) c.depl_y_hi = d["y_hi"].get<double>();
            if (d.contains("min_alpha")) c.depl_min_alpha = d["min_alpha"].get<double>();
            if (d.contains("min_beta")) c.depl_min_beta = d["min_beta"].get<double>();
        }
        if (j.contains("free_transport")) c.free_transport = j["free_transport"].get<bool>();
        if (j.contains("skip_audit")) c.skip_audit = j["skip_audit"].get<bool>();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    if (c.grid_n < 16) throw ConfigError("grid_n must be >= 16");
    for (int k : c.k)
        if (k == 0) throw ConfigError("k = 0 is excluded");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

std::string canonical_config(const RunConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["profile"] = {{"kind", c.profile.kind}, {"center", c.profile.center}, {"coeffs", c.profile.coeffs}};
    j["k"] = c.k;
    j["grid_n"] = c.grid_n;
    j["eps_schedule"] = c.eps_schedule;
    j["lambda_panels"] = {{"base", c.lambda_base_panels}, {"min_width_rel", c.lambda_min_width_rel}};
    j["time"] = {{"t_end", c.t_end}, {"dt", c.dt}, {"snapshot_dt", c.snapshot_dt}, {"times", c.times}};
    j["omega0"] = {{"kind", c.omega0}, {"path", c.omega0_file}};
    j["seed"] = c.seed;
    j["spectrum"] = {{"k_max", c.k_max}};
    j["lambda_grid"] = c.lambda_grid;
    j["lap"] = {{"norm_flavor", c.norm_flavor}, {"bracket_reading", c.bracket_reading}};
    j["rates"] = {{"t0", c.rate_t0}, {"t1", c.rate_t1}, {"max_psi", c.rate_max_psi},
                  {"max_ux", c.rate_max_ux}, {"max_uy", c.rate_max_uy}};
    j["depletion"] = {{"t0", c.depl_t0}, {"y_lo", c.depl_y_lo}, {"y_hi", c.depl_y_hi},
                      {"min_alpha", c.depl_min_alpha}, {"min_beta", c.depl_min_beta}};
    j["free_transport"] = c.free_transport;
    j["skip_audit"] = c.skip_audit;
    return j.dump();  // nlohmann objects iterate in sorted key order
}

}  // namespace cll
