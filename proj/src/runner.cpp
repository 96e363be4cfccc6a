#include "cll/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "cll/analysis.hpp"
#include "cll/errors.hpp"
#include "cll/evolution.hpp"
#include "cll/greens.hpp"
#include "cll/parallel.hpp"
#include "cll/rayleigh.hpp"
#include "cll/report.hpp"
#include "cll/spectrum.hpp"

namespace cll {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ComplexGridFunction load_omega0(const RunConfig& c, Grid g) {
    if (!c.omega0_file.empty()) {
        std::ifstream in(c.omega0_file);
        if (!in) throw ConfigError("cannot read omega0 file " + c.omega0_file);
        ComplexGridFunction f(g);
        std::string line;
        int j = 0;
        while (std::getline(in, line) && j < g.points()) {
            if (line.empty() || line[0] == '#') continue;
            double re = 0.0, im = 0.0;
            if (std::sscanf(line.c_str(), "%lf,%lf", &re, &im) < 1)
                throw ConfigError("bad omega0 file line: " + line);
            f[j++] = Complex(re, im);
        }
        if (j != g.points())
            throw ConfigError("omega0 file has " + std::to_string(j) + " samples, grid wants " +
                              std::to_string(g.points()));
        return f;
    }
    return omega0_named(g, c.omega0);
}

void write_metadata(const RunConfig& c, const ShearProfile& p, const Grid& g,
                    const std::string& hash) {
    json m;
    m["config"] = json::parse(canonical_config(c));
    m["config_hash"] = hash;
    m["derived"]["y_star"] = p.y_star();
    m["derived"]["b2_star"] = p.b2_star();
    m["derived"]["delta0"] = p.delta0();
    m["derived"]["eps_floor"] = eps_floor(g, p);
    m["derived"]["eps_schedule_clipped"] = clip_eps_schedule(c.eps_schedule, eps_floor(g, p));
    std::ofstream out(fs::path(c.output_dir) / (c.experiment + ".meta.json"));
    out << m.dump(2) << "\n";
}

std::vector<double> default_lambda_grid(const ShearProfile& p, bool degenerate) {
    auto geom = p.geometry();
    std::vector<double> grid;
    if (degenerate) {
        // delta(lambda)/delta0 swept across the sign-coherent window
        for (int i = 0; i < 8; ++i) {
            double q = 0.15 + 0.1 * i;
            grid.push_back(p.b_star() + geom.coherent_halfwidth() * q * q);
        }
    } else {
        auto sigma = geom.sigma();
        auto sd = geom.sigma_d(p.delta0());
        double lo = sd.hi + 0.02 * sigma.length();
        for (int i = 0; i < 8; ++i)
            grid.push_back(lo + (sigma.hi - 0.02 * sigma.length() - lo) * i / 7.0);
    }
    return grid;
}

int run_spectrum(const RunConfig& c, const ShearProfile& p, Grid g, const std::string& hash) {
    auto rep = assumption_report(p, g, c.k_max, c.jobs);
    CsvWriter csv(fs::path(c.output_dir) / "spectrum_check.csv",
                  {"record", "k", "re_lambda", "im_lambda", "value", "classification"}, hash);
    for (const auto& h : rep.discrete_hits)
        csv.row({"discrete", CsvWriter::num(h.k), CsvWriter::num(h.lambda.real()),
                 CsvWriter::num(h.lambda.imag()), CsvWriter::num(h.residual),
                 h.stable ? "stable" : "drifting"});
    for (const auto& e : rep.embedded_probes)
        csv.row({"embedded", CsvWriter::num(e.k), CsvWriter::num(e.lambda), "0",
                 CsvWriter::num(e.sigma_min), e.candidate ? "candidate" : "clear"});
    csv.row({"verdict", CsvWriter::num(rep.k_max), "0", "0", rep.pass ? "1" : "0",
             rep.pass ? "pass" : "fail"});
    std::cout << "spectrum-check: " << (rep.pass ? "pass" : "fail") << " (|k| <= " << rep.k_max
              << ", " << rep.discrete_hits.size() << " discrete hits)\n";
    if (c.assert_mode && !rep.pass) return 1;
    return 0;
}

int run_greens_verify(const RunConfig& c, const ShearProfile& p, Grid g, const std::string& hash) {
    auto geom = p.geometry();
    double floor = eps_floor(g, p);
    std::vector<EnvelopeCase> cases;
    double ch = geom.coherent_halfwidth();
    for (int k : {1, 4, 16, 40}) {
        for (double q : {0.3, 0.7}) {
            double lam = p.b_star() + ch * q * q;
            double z_far = p.y_star() + 0.35;
            double z_near = p.y_star() + 0.5 * geom.delta(lam);
            cases.push_back(EnvelopeCase{k, lam, std::max(1e-2, floor), z_far});
            if (cases.size() < 12) cases.push_back(EnvelopeCase{k, lam, std::max(1e-2, floor), z_near});
        }
    }
    cases.resize(12);
    auto rows = verify_envelopes(p, cases, g.n);
    CsvWriter csv(fs::path(c.output_dir) / "greens_verify.csv",
                  {"k", "lambda", "eps", "z", "bound_id", "max_ratio", "n", "refined_ratio",
                   "diverging"},
                  hash);
    bool any_diverging = false;
    for (const auto& r : rows) {
        csv.row({CsvWriter::num(r.c.k), CsvWriter::num(r.c.lambda), CsvWriter::num(r.c.eps),
                 CsvWriter::num(r.c.z), r.bound_id, CsvWriter::num(r.max_ratio), CsvWriter::num(r.n),
                 CsvWriter::num(r.refined_ratio), r.diverging ? "1" : "0"});
        any_diverging |= r.diverging;
    }
    std::cout << "greens-verify: " << rows.size() << " bound rows, "
              << (any_diverging ? "divergence flagged" : "all constants stable") << "\n";
    if (c.assert_mode && any_diverging) return 1;
    return 0;
}

int run_resolvent(const RunConfig& c, const ShearProfile& p, Grid g, const std::string& hash) {
    auto omega0 = load_omega0(c, g);
    auto eps = clip_eps_schedule(c.eps_schedule, eps_floor(g, p));
    auto lambdas = c.lambda_grid;
    if (lambdas.empty()) lambdas = default_lambda_grid(p, false);
    CsvWriter csv(fs::path(c.output_dir) / "resolvent.csv",
                  {"k", "lambda", "eps", "iota", "norm_l2", "norm_h1k", "residual"}, hash);
    for (int k : c.k) {
        for (double lam : lambdas) {
            for (double e : eps) {
                for (Branch iota : {Branch::plus, Branch::minus}) {
                    auto sol = solve_rayleigh(p, g, k, lam, e, iota, omega0);
                    csv.row({CsvWriter::num(k), CsvWriter::num(lam), CsvWriter::num(e),
                             iota == Branch::plus ? "+" : "-", CsvWriter::num(norm_L2(sol.psi)),
                             CsvWriter::num(norm_H1k(sol.psi, k)), CsvWriter::num(sol.residual)});
                }
            }
        }
    }
    std::cout << "resolvent: wrote " << lambdas.size() << " lambda rows per (k, eps, branch)\n";
    return 0;
}

int run_lap_probe(const RunConfig& c, const ShearProfile& p, Grid g, const std::string& hash) {
    auto eps = clip_eps_schedule(c.eps_schedule, eps_floor(g, p));
    NormFlavor flavor = c.norm_flavor == "XN"   ? NormFlavor::XN
                        : c.norm_flavor == "XL" ? NormFlavor::XL
                                                : NormFlavor::H1k;
    BracketReading reading =
        c.bracket_reading == "y" ? BracketReading::y_variable : BracketReading::z_variable;
    auto lambdas = c.lambda_grid;
    if (lambdas.empty()) lambdas = default_lambda_grid(p, flavor != NormFlavor::H1k);
    CsvWriter csv(fs::path(c.output_dir) / "lap_probe.csv",
                  {"norm_flavor", "reading", "k", "lambda", "eps", "sigma_min", "kappa_hat",
                   "spectral_hit"},
                  hash);
    double kappa_all = std::numeric_limits<double>::infinity();
    for (int k : c.k) {
        for (double lam : lambdas) {
            auto rep = lap_probe(p, g, k, lam, eps, flavor, reading);
            for (const auto& e : rep.entries)
                csv.row({c.norm_flavor, c.bracket_reading, CsvWriter::num(k), CsvWriter::num(lam),
                         CsvWriter::num(e.eps), CsvWriter::num(e.sigma_min),
                         CsvWriter::num(rep.kappa_hat), e.spectral_hit ? "1" : "0"});
            kappa_all = std::min(kappa_all, rep.kappa_hat);
        }
    }
    std::cout << "lap-probe[" << c.norm_flavor << "]: kappa_hat = " << kappa_all << "\n";
    if (c.assert_mode && !(kappa_all >= 1e-3)) return 1;
    return 0;
}

std::vector<double> spectral_times(const RunConfig& c) {
    if (!c.times.empty()) return c.times;
    std::vector<double> t;
    for (double v = 0.0; v <= c.t_end + 1e-9; v += std::max(c.snapshot_dt, 1e-3)) t.push_back(v);
    return t;
}

void write_trace_csv(const RunConfig& c, const EvolutionTrace& trace, const std::string& name,
                     const std::string& hash) {
    CsvWriter csv(fs::path(c.output_dir) / (name + ".csv"),
                  {"t", "y", "re_omega", "im_omega", "re_psi", "im_psi"}, hash);
    const Grid& g = trace.grid;
    int stride = std::max(1, g.points() / 256);  // keep files browsable
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        for (int j = 0; j < g.points(); j += stride)
            csv.row({CsvWriter::num(trace.times[i]), CsvWriter::num(g.node(j)),
                     CsvWriter::num(trace.omega[i][j].real()), CsvWriter::num(trace.omega[i][j].imag()),
                     CsvWriter::num(trace.psi[i][j].real()), CsvWriter::num(trace.psi[i][j].imag())});
    }
}

int run_evolve_direct(const RunConfig& c, const ShearProfile& p, Grid g, const std::string& hash) {
    auto omega0 = load_omega0(c, g);
    auto trace = evolve_direct(p, g, c.k.front(), omega0, c.t_end, c.dt, c.snapshot_dt,
                               !c.free_transport);
    write_trace_csv(c, trace, "evolve_direct", hash);
    if (!trace.energy.empty()) {
        double drift = 0.0;
        for (double e : trace.energy) drift = std::max(drift, std::abs(e - trace.energy.front()));
        std::cout << "evolve-direct: relative energy drift "
                  << drift / std::abs(trace.energy.front()) << "\n";
    }
    return 0;
}

int run_evolve_spectral(const RunConfig& c, const ShearProfile& p, Grid g, const std::string& hash) {
    if (!c.skip_audit) {
        Grid ga = Grid::with_interior(256);
        auto rep = assumption_report(p, ga, std::abs(c.k.front()), c.jobs);
        if (!rep.pass)
            throw SpectralHit("Assumption audit failed for this profile; pass skip_audit to override");
    }
    auto omega0 = load_omega0(c, g);
    SpectralEvolveSpec spec;
    spec.panels.base_panels = c.lambda_base_panels;
    spec.panels.min_width_rel = c.lambda_min_width_rel;
    spec.eps_schedule = c.eps_schedule;
    auto times = spectral_times(c);
    auto trace = evolve_spectral(p, g, c.k.front(), omega0, times, spec);
    write_trace_csv(c, trace, "evolve_spectral", hash);
    std::cout << "evolve-spectral: " << times.size() << " snapshots, "
              << trace.diag_y.size() << " diagnostic offsets\n";
    return 0;
}

int run_rates(const RunConfig& c, const ShearProfile& p, Grid g, const std::string& hash) {
    auto omega0 = load_omega0(c, g);
    double mk = reference_scale_mk(omega0, c.k.front());
    auto trace = evolve_direct(p, g, c.k.front(), omega0, std::max(c.t_end, c.rate_t1), c.dt,
                               c.snapshot_dt, !c.free_transport);
    CsvWriter csv(fs::path(c.output_dir) / "rates.csv",
                  {"quantity", "t0", "t1", "slope", "intercept", "r2", "mk"}, hash);
    bool ok = true;
    std::vector<SvgSeries> series;
    for (auto q : {TraceQuantity::psi, TraceQuantity::ux, TraceQuantity::uy}) {
        auto fit = fit_decay_rate(trace, q, c.rate_t0, c.rate_t1, mk);
        csv.row({fit.quantity, CsvWriter::num(fit.t0), CsvWriter::num(fit.t1),
                 CsvWriter::num(fit.slope), CsvWriter::num(fit.intercept), CsvWriter::num(fit.r2),
                 CsvWriter::num(fit.mk)});
        double bound = q == TraceQuantity::psi ? c.rate_max_psi
                       : q == TraceQuantity::ux ? c.rate_max_ux
                                                : c.rate_max_uy;
        bool pass = fit.slope <= bound && !fit.inconclusive;
        ok &= pass;
        std::cout << "rates: " << fit.quantity << " slope " << fit.slope << " (r2 " << fit.r2
                  << ") threshold " << bound << (pass ? " ok" : " FAIL") << "\n";
    }
    if (c.plots) {
        auto [ux, uy] = velocities(trace);
        SvgSeries spsi{"psi", {}, {}}, sux{"ux", {}, {}}, suy{"uy", {}, {}};
        for (std::size_t i = 0; i < trace.times.size(); ++i) {
            if (trace.times[i] < 1.0) continue;
            spsi.x.push_back(trace.times[i]);
            spsi.y.push_back(norm_L2(trace.psi[i]));
            sux.x.push_back(trace.times[i]);
            sux.y.push_back(norm_L2(ux[i]));
            suy.x.push_back(trace.times[i]);
            suy.y.push_back(norm_L2(uy[i]));
        }
        write_svg_plot(fs::path(c.output_dir) / "rates.svg", "inviscid damping decay", "t",
                       "L2 norm", {spsi, sux, suy}, true);
    }
    return c.assert_mode && !ok ? 1 : 0;
}

int run_depletion(const RunConfig& c, const ShearProfile& p, Grid g, const std::string& hash) {
    auto omega0 = load_omega0(c, g);
    auto trace = evolve_direct(p, g, c.k.front(), omega0, std::max(c.t_end, c.rate_t1), c.dt,
                               c.snapshot_dt, !c.free_transport);
    auto rep = depletion_measure(trace, p, c.depl_t0, c.depl_y_lo, c.depl_y_hi);
    CsvWriter csv(fs::path(c.output_dir) / "depletion.csv",
                  {"fit", "exponent", "constant", "r2", "window_lo", "window_hi", "t0"}, hash);
    csv.row({"spatial", CsvWriter::num(rep.spatial_exponent), CsvWriter::num(rep.spatial_constant),
             CsvWriter::num(rep.spatial_r2), CsvWriter::num(rep.y_lo), CsvWriter::num(rep.y_hi),
             CsvWriter::num(rep.t0)});
    csv.row({"temporal", CsvWriter::num(rep.temporal_exponent),
             CsvWriter::num(rep.temporal_constant), CsvWriter::num(rep.temporal_r2),
             CsvWriter::num(c.depl_t0), CsvWriter::num(c.rate_t1), CsvWriter::num(rep.t0)});
    std::cout << "depletion: alpha = " << rep.spatial_exponent << ", beta = "
              << rep.temporal_exponent << "\n";
    if (c.plots) {
        const Grid& gg = trace.grid;
        SvgSeries env{"sup_t |omega|", {}, {}};
        for (int j = 1; j <= gg.n; ++j) {
            double off = std::abs(gg.node(j) - p.y_star());
            if (off < c.depl_y_lo || off > c.depl_y_hi) continue;
            double s = 0.0;
            for (std::size_t i = 0; i < trace.times.size(); ++i)
                if (trace.times[i] >= c.depl_t0) s = std::max(s, std::abs(trace.omega[i][j]));
            env.x.push_back(off);
            env.y.push_back(s);
        }
        write_svg_plot(fs::path(c.output_dir) / "depletion.svg", "vorticity depletion envelope",
                       "|y - y*|", "sup_t |omega|", {env}, true);
    }
    bool ok = c.free_transport
                  ? rep.spatial_exponent <= 0.1
                  : rep.spatial_exponent >= c.depl_min_alpha && rep.temporal_exponent >= c.depl_min_beta;
    return c.assert_mode && !ok ? 1 : 0;
}

}  // namespace

int run(const RunConfig& c) {
    fs::create_directories(c.output_dir);
    ShearProfile p = make_profile(c.profile);
    Grid g = Grid::with_interior(c.grid_n);
    std::string hash = config_hash(canonical_config(c));
    write_metadata(c, p, g, hash);

    if (c.experiment == "spectrum-check") return run_spectrum(c, p, g, hash);
    if (c.experiment == "greens-verify") return run_greens_verify(c, p, g, hash);
    if (c.experiment == "resolvent") return run_resolvent(c, p, g, hash);
    if (c.experiment == "lap-probe") return run_lap_probe(c, p, g, hash);
    if (c.experiment == "evolve-direct") return run_evolve_direct(c, p, g, hash);
    if (c.experiment == "evolve-spectral") return run_evolve_spectral(c, p, g, hash);
    if (c.experiment == "rates") return run_rates(c, p, g, hash);
    if (c.experiment == "depletion") return run_depletion(c, p, g, hash);
    throw ConfigError("unknown experiment '" + c.experiment + "'");
}

}  // namespace cll
