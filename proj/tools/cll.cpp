// Command-line front end: one subcommand per experiment, JSON config file with
// flag overrides, CSV/SVG artifacts in the output directory.

#include <iostream>

#include <CLI11.hpp>

#include "cll/errors.hpp"
#include "cll/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"cll - spectral laboratory for the linearized 2D Euler channel problem"};
    app.require_subcommand(1);

    std::string config_path, profile_kind, omega0, out_dir, norm_flavor, bracket_reading;
    std::vector<int> ks;
    std::vector<double> eps_schedule, lambda_grid;
    int n = 0, k_max = 0, jobs = -1;
    double t_end = -1.0, dt = -1.0, snapshot_dt = -1.0;
    bool assert_mode = false, plots = false, free_transport = false, skip_audit = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration");
        cmd->add_option("--profile", profile_kind,
                        "profile kind (quadratic_well, quartic_perturbation, cosine_well)");
        cmd->add_option("--k", ks, "Fourier mode(s)");
        cmd->add_option("--n", n, "interior grid points");
        cmd->add_option("--eps-schedule", eps_schedule, "epsilon schedule (clipped at eps_floor)");
        cmd->add_option("--omega0", omega0, "named initial data (sin_pi, sin_2pi, bump) or file path");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--jobs", jobs, "worker threads (default CLL_JOBS or hardware)");
        cmd->add_flag("--assert", assert_mode, "exit nonzero when acceptance thresholds fail");
        cmd->add_flag("--plot", plots, "emit SVG plots next to the CSV files");
        return cmd;
    };

    auto* spectrum = add_common(app.add_subcommand("spectrum-check", "Assumption audit"));
    spectrum->add_option("--k-max", k_max, "scan 1 <= k <= k_max");
    auto* greens = add_common(app.add_subcommand("greens-verify", "Green's function bound envelopes"));
    auto* resolvent = add_common(app.add_subcommand("resolvent", "Rayleigh resolvent sweep"));
    resolvent->add_option("--lambda-grid", lambda_grid, "explicit lambda values");
    auto* lap = add_common(app.add_subcommand("lap-probe", "limiting absorption sigma_min floors"));
    lap->add_option("--lambda-grid", lambda_grid, "explicit lambda values");
    lap->add_option("--norm", norm_flavor, "H1k | XN | XL");
    lap->add_option("--bracket", bracket_reading, "cutoff bracket reading: z | y");
    auto* edirect = add_common(app.add_subcommand("evolve-direct", "direct time integration"));
    edirect->add_option("--t-end", t_end);
    edirect->add_option("--dt", dt);
    edirect->add_option("--snapshot-dt", snapshot_dt);
    edirect->add_flag("--free-transport", free_transport, "disable the b'' coupling");
    auto* espectral = add_common(app.add_subcommand("evolve-spectral", "resolvent-contour synthesis"));
    espectral->add_option("--t-end", t_end);
    espectral->add_option("--snapshot-dt", snapshot_dt);
    espectral->add_flag("--skip-audit", skip_audit, "skip the Assumption audit precondition");
    auto* rates = add_common(app.add_subcommand("rates", "inviscid damping rate fits"));
    rates->add_option("--t-end", t_end);
    rates->add_option("--dt", dt);
    auto* depletion = add_common(app.add_subcommand("depletion", "vorticity depletion fits"));
    depletion->add_option("--t-end", t_end);
    depletion->add_option("--dt", dt);
    depletion->add_flag("--free-transport", free_transport, "negative control");

    CLI11_PARSE(app, argc, argv);

    try {
        cll::RunConfig cfg;
        if (!config_path.empty()) cfg = cll::load_config(config_path);
        cfg.experiment = app.get_subcommands().front()->get_name();
        if (!profile_kind.empty()) cfg.profile.kind = profile_kind;
        if (!ks.empty()) cfg.k = ks;
        if (n > 0) cfg.grid_n = n;
        if (!eps_schedule.empty()) cfg.eps_schedule = eps_schedule;
        if (!omega0.empty()) {
            if (omega0.find('.') != std::string::npos && omega0.find(".csv") != std::string::npos)
                cfg.omega0_file = omega0;
            else
                cfg.omega0 = omega0;
        }
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (jobs >= 0) cfg.jobs = jobs;
        if (assert_mode) cfg.assert_mode = true;
        if (plots) cfg.plots = true;
        if (k_max > 0) cfg.k_max = k_max;
        if (!lambda_grid.empty()) cfg.lambda_grid = lambda_grid;
        if (!norm_flavor.empty()) cfg.norm_flavor = norm_flavor;
        if (!bracket_reading.empty()) cfg.bracket_reading = bracket_reading;
        if (t_end > 0.0) cfg.t_end = t_end;
        if (dt > 0.0) cfg.dt = dt;
        if (snapshot_dt > 0.0) cfg.snapshot_dt = snapshot_dt;
        if (free_transport) cfg.free_transport = true;
        if (skip_audit) cfg.skip_audit = true;
        return cll::run(cfg);
    } catch (const cll::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
