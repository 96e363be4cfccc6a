#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cll/profile.hpp"

namespace cll {

struct ProfileSpec {
    std::string kind = "quadratic_well";  // quadratic_well | quartic_perturbation | cosine_well | custom
    double center = 0.5;                  // custom: polynomial in (y - center)
    std::vector<double> coeffs;           // custom: coefficient list, constant term first
};

ShearProfile make_profile(const ProfileSpec& spec);

struct RunConfig {
    std::string experiment;  // spectrum-check | greens-verify | resolvent | lap-probe |
                             // evolve-direct | evolve-spectral | rates | depletion
    ProfileSpec profile;
    std::vector<int> k{1};
    int grid_n = 1024;
    std::vector<double> eps_schedule{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};

    // lambda quadrature
    int lambda_base_panels = 48;
    double lambda_min_width_rel = 1e-6;

    // time stepping / snapshots
    double t_end = 50.0;
    double dt = 0.02;
    double snapshot_dt = 0.5;
    std::vector<double> times;  // spectral snapshots; derived from t_end when empty

    std::string omega0 = "sin_pi";
    std::string omega0_file;

    std::string output_dir = "out";
    std::uint64_t seed = 1234;
    int jobs = 0;
    bool assert_mode = false;
    bool plots = false;

    // spectrum-check
    int k_max = 8;
    // resolvent / lap-probe
    std::vector<double> lambda_grid;
    std::string norm_flavor = "H1k";     // H1k | XN | XL
    std::string bracket_reading = "z";   // z | y
    // rates
    double rate_t0 = 20.0, rate_t1 = 200.0;
    double rate_max_psi = -1.8, rate_max_ux = -0.9, rate_max_uy = -1.8;
    // depletion
    double depl_t0 = 20.0, depl_y_lo = 0.02, depl_y_hi = 0.2;
    double depl_min_alpha = 1.60, depl_min_beta = 0.775;
    bool free_transport = false;  // disable the b'' coupling (control runs)
    bool skip_audit = false;      // evolve-spectral: skip the Assumption audit
};

// Reads a JSON config file; unknown keys are rejected (schema validation).
RunConfig load_config(const std::string& path);
RunConfig parse_config_json(const std::string& text);

// Canonical serialization (sorted keys, fixed formatting) used for hashing and
// for the metadata sidecar.
std::string canonical_config(const RunConfig& c);

}  // namespace cll
