#pragma once

// Single degree of freedom wave energy converter with a drivetrain and a
// surface permanent magnet generator, reduced to a Thevenin source seen by
// the controller (the load).
//
// Units are SI with the angular frequency in rad/s. The gear ratio g_ratio
// carries whatever unit makes k_t * g_ratio a force per ampere:
//   * rotary PTO:  g_ratio in rad/m, b_d in N m s/rad, k_d in N m/rad, k_t in N m/A
//   * linear PTO:  g_ratio = 1 (dimensionless), b_d in N s/m, k_d in N/m, k_t in N/A
//
// Sign convention. The generator terminal voltage is taken in generator
// convention, v_load = k_t * Omega - R i - L di/dt, with the controller
// imposing v_load = Z_C i. Under this convention the controller is the load
// of the Thevenin circuit (Z_L = Z_C) and the conjugate load reproduces the
// matched power |V_th|^2 / (8 Re Z_th).

#include <utility>

#include "wecsat/mismatch.hpp"

namespace wecsat {

struct WecPlant {
    double m = 0.0;             ///< body mass [kg]
    double a_added = 0.0;       ///< added mass at omega [kg]
    double b_h = 0.0;           ///< radiation damping [N s/m]
    double k_h = 0.0;           ///< hydrostatic stiffness [N/m]
    double g_ratio = 1.0;       ///< effective gear ratio
    double b_d = 0.0;           ///< drivetrain damping
    double k_d = 0.0;           ///< drivetrain stiffness
    double k_t = 1.0;           ///< torque (force) constant
    double r_w = 0.0;           ///< winding resistance [ohm]
    double l_w = 0.0;           ///< winding inductance [H]
    int p_poles = 2;            ///< machine poles, used literally in the phase-voltage term
    double omega = 1.0;         ///< wave angular frequency [rad/s]
    Complex f_e{0.0, 0.0};      ///< excitation force phasor [N, peak]
    double j_density = 0.0;     ///< incident wave energy flux per unit crest width [W/m]
    double k_wavenumber = 0.0;  ///< [1/m]
    int g0 = 1;                 ///< 1 for heave, 2 for surge or pitch

    /// Throws DomainError when a physical invariant is violated.
    void validate() const;

    Complex mechanical_impedance(double w) const;
    Complex winding_impedance(double w) const;
    /// Thevenin impedance at an arbitrary frequency (used for harmonics).
    Complex thevenin_impedance(double w) const;

    Complex mechanical_impedance() const { return mechanical_impedance(omega); }
    Complex thevenin_impedance() const { return thevenin_impedance(omega); }
};

/// Sets |f_e| from the Haskind relation |F_e|^2 = 8 b_h g0 J / k, with the
/// given phase. Requires positive j_density and k_wavenumber.
WecPlant with_haskind_excitation(WecPlant plant, double phase = 0.0);

/// True when f_e satisfies the Haskind relation to relative tolerance `rtol`.
bool is_haskind_consistent(const WecPlant& plant, double rtol = 1e-10);

struct NondimGroups {
    double r_cal = 0.0;    ///< R b_h / (k_t g)^2
    double d_cal = 1.0;    ///< b_h / (b_h + g^2 b_d)
    double alpha_m = 0.0;  ///< Im(Z_m) / Re(Z_m)
    double l_cal = 0.0;    ///< omega L / R

    void validate() const;
};

struct OperatingAmplitudes {
    Complex x_amp;      ///< position phasor [m]
    double v_s_amp;     ///< phase voltage amplitude [V]
    double s_max;       ///< upper extreme of instantaneous power [W]
    double s_min;       ///< lower extreme of instantaneous power [W]
    double v_amp;       ///< q-axis voltage amplitude [V]
    double i_amp;       ///< q-axis current amplitude [A]
    double speed_amp;   ///< generator speed amplitude
};

TheveninSource thevenin_from_plant(const WecPlant& plant);
NondimGroups nondim_from_plant(const WecPlant& plant);

/// Matched electrical power from the nondimensional groups and wave climate.
double matched_power(const NondimGroups& groups, double j_density, double k_wavenumber, int g0);

/// Reactance ratio of the Thevenin impedance from the nondimensional groups.
double alpha_from_nondim(const NondimGroups& groups);

/// The two mechanical reactance ratios +-sqrt(1 + D/R) that maximize |alpha|
/// when the winding inductance is negligible. Returned as (+, -).
std::pair<double, double> optimal_alpha_m_for_limits(const NondimGroups& groups);

/// Position, phase voltage and apparent power amplitudes with the controller
/// set to Z_L = z conj(Z_th).
OperatingAmplitudes constraint_amplitudes(const WecPlant& plant, Complex z);

}  // namespace wecsat
