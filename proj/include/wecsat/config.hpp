#pragma once

// Run configuration for the command line tool. Plain text, one `key = value`
// per line under `[section]` headers; `#` and `;` start comments. Unknown
// sections and keys are rejected.
//
//   [plant]    m a_added b_h k_h g_ratio b_d k_d k_t r_w l_w p_poles omega
//              j_density k_wavenumber g0 f_e_mag f_e_phase excitation
//   [nondim]   r_cal d_cal alpha_m l_cal j_density k_wavenumber g0
//   [sweep]    alpha gamma_points angle_points pareto_points fsat_harmonics
//              inv_i_script_min inv_i_script_max inv_i_script_points
//              i_max_fractions n_harmonics
//   [sim]      steps_per_period n_periods transient_periods convergence_tol
//              algebraic_loop_tol
//   [output]   directory svg
//
// List values are comma separated. `excitation = haskind` (the default when
// j_density and k_wavenumber are given) derives |f_e| from the wave climate;
// `raw` uses f_e_mag and f_e_phase as given.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wecsat/time_domain.hpp"
#include "wecsat/wec_model.hpp"

namespace wecsat {

struct NondimPlant {
    NondimGroups groups;
    double j_density = 0.0;
    double k_wavenumber = 0.0;
    int g0 = 1;
};

struct SweepConfig {
    std::vector<double> alpha{0.0, 1.0, 2.5};
    std::size_t gamma_points = 101;
    std::size_t angle_points = 360;
    std::size_t pareto_points = 201;
    std::vector<int> fsat_harmonics{1, 3, 5, 7};
    double inv_i_script_min = 0.0;
    double inv_i_script_max = 10.0;
    std::size_t inv_i_script_points = 201;
    std::vector<double> i_max_fractions{1.0, 0.8, 0.6, 0.4};
    int n_harmonics = 9;
};

struct RunConfig {
    std::optional<WecPlant> plant;
    std::optional<NondimPlant> nondim;
    SweepConfig sweep;
    SimConfig sim;
    std::string output_directory;
    bool svg = false;

    /// Throws ConfigError when both plant blocks are present or a sweep range is empty.
    void validate() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

}  // namespace wecsat
