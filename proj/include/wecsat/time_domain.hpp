#pragma once

// Nonlinear time-domain simulation of the WEC with a current-limited linear
// controller. Serves as the reference against which the frequency-domain and
// describing-function predictions are checked.
//
// The controller Z_C = B_c + K_c / s is realized as a proper filter plus
// feedthrough:
//   i_temp = (v_load - (K_c / B_c) xi) / B_c,   d(xi)/dt = -(K_c / B_c) xi + v_load,
// and the applied current is i = i_max sat(i_temp / i_max).

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "wecsat/describing_function.hpp"
#include "wecsat/wec_model.hpp"

namespace wecsat {

struct SimState {
    double x = 0.0;       ///< position [m]
    double v = 0.0;       ///< velocity [m/s]
    double xi = 0.0;      ///< controller filter state
    double i_wind = 0.0;  ///< winding current, a state only when l_w > 0 [A]
    double t = 0.0;
};

struct SimConfig {
    int steps_per_period = 2000;
    int n_periods = 40;           ///< upper bound on simulated periods
    int transient_periods = 20;   ///< periods discarded before steady state may be declared
    double convergence_tol = 1e-3;
    double algebraic_loop_tol = 1e-12;
    int n_harmonics = 9;
    /// Starting state at t = 0. When empty the unsaturated linear steady
    /// state is used, which removes most of the start-up transient.
    std::optional<SimState> initial;

    void validate() const;
};

/// Samples of the final (steady-state) period, one per accepted step.
struct Waveforms {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> i;
    std::vector<double> v_load;
    std::vector<double> p_inst;
};

struct SimResult {
    Waveforms waveforms;
    double omega = 0.0;
    double p_avg = 0.0;                    ///< mean of v_load * i over the window [W]
    std::vector<Complex> harmonic_currents;  ///< [k] is harmonic k + 1
    double dc_current = 0.0;
    double x_amp = 0.0;                    ///< half the peak-to-peak position [m]
    Complex x_fundamental;                 ///< first harmonic of position [m]
    double peak_current = 0.0;
    bool converged = false;
    int periods_run = 0;
    std::vector<double> period_powers;     ///< mean electrical power of each simulated period

    // Energy bookkeeping over the window [W].
    double p_excitation = 0.0;
    double p_mechanical_loss = 0.0;
    double p_winding_loss = 0.0;
};

/// Integrates the plant with controller impedance `z_c` (evaluated at the
/// wave frequency) and current limit `i_max` (infinity disables the limit).
SimResult simulate(const WecPlant& plant, Complex z_c, double i_max, const SimConfig& cfg = {});

struct HarmonicDecomposition {
    double dc = 0.0;
    std::vector<Complex> phasors;  ///< [k] is harmonic k + 1, peak amplitude
};

/// DFT phasors (2 / T_w) * integral of y(t) e^{-i n w t} over a uniformly
/// sampled window covering an integer number of periods.
HarmonicDecomposition harmonic_decompose(std::span<const double> t, std::span<const double> y, double omega,
                                         int n_max);

/// Harmonics of the current in a simulation result.
HarmonicDecomposition harmonic_decompose(const SimResult& result, int n_max);

/// CSV dump of the steady-state period with header t,x,v,i,v_load,p_inst.
void write_waveforms_csv(std::ostream& out, const SimResult& result);

/// Attenuation of the source impedance at the third harmonic,
/// |Z_th(w)| / |Z_th(3 w)|. Large values mean low-pass dynamics.
double low_pass_figure_of_merit(const WecPlant& plant);

struct ValidationThresholds {
    static constexpr double unsaturated = 0.005;
    static constexpr double saturated_power = 0.05;
    static constexpr double saturated_current = 0.02;
    static constexpr double low_pass = 3.0;
    static constexpr double broadband = 1.5;
};

struct ValidationReport {
    double i_max = 0.0;
    double i_max_fraction = 0.0;  ///< i_max / |I_L^m|
    bool saturated = false;
    double figure_of_merit = 0.0;
    bool low_pass = false;
    bool assumption_violated = false;  ///< saturated on a broadband plant
    bool sim_converged = false;

    double p_df = 0.0;
    double p_sim = 0.0;
    double power_error = 0.0;
    double i1_df = 0.0;
    double i1_sim = 0.0;
    double current_error = 0.0;
    double x_df = 0.0;
    double x_sim = 0.0;
    double position_error = 0.0;

    bool passed = false;
};

/// Runs the describing-function solve and the simulation for the saturated
/// conjugate controller and compares power, fundamental current and position.
ValidationReport validate_df(const WecPlant& plant, double i_max, const SimConfig& cfg = {},
                             const SaturationOptions& opts = {});

}  // namespace wecsat
