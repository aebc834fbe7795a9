#pragma once

// Sinusoidal-input describing functions for a current (force) limit applied
// to the output of a linear impedance controller:
//
//   i(t) = i_max * sat(i_temp(t) / i_max),   i_temp = v_load / Z_C.
//
// Harmonic phasors use the same cosine convention as the rest of the library.
// If i_temp = Re(I_temp e^{i w t}) with psi = arg(I_temp), the nth harmonic
// of the clipped wave is f_sat,n |I_temp| e^{i (n (psi + pi/2) - pi/2)}; the
// fundamental keeps the phase psi and odd harmonics alternate in sign.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "wecsat/mismatch.hpp"
#include "wecsat/wec_model.hpp"

namespace wecsat {

/// nth harmonic amplitude of a clipped unit sine relative to its unclipped
/// amplitude, with i_script = i_max / |i_temp|. Zero for even n. An infinite
/// i_script means no clipping.
double saturation_factor(int n, double i_script);

struct SaturationFactors {
    double i_script = 0.0;
    std::map<int, double> factors;  ///< odd n -> f_sat,n
};

SaturationFactors saturation_factors(double i_script, int n_max);

struct HarmonicTerm {
    int n = 1;
    Complex current;       ///< I_n [A]
    Complex load_voltage;  ///< V_L,n [V]
    double power = 0.0;    ///< 0.5 Re(V_L,n conj(I_n)) [W]
};

struct SaturationSolution {
    double i_max = 0.0;
    Complex i_temp;               ///< controller output before the limiter
    double psi = 0.0;             ///< arg(i_temp)
    double i_script = 0.0;        ///< i_max / |i_temp|
    double f_sat1 = 1.0;
    std::vector<HarmonicTerm> harmonics;  ///< n = 1, 3, 5, ...
    double p_total = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> residuals;

    const HarmonicTerm& fundamental() const { return harmonics.front(); }
};

/// Thevenin impedance at the nth harmonic of the wave frequency.
using HarmonicImpedance = std::function<Complex(int n)>;

struct SaturationOptions {
    int n_harmonics = 9;       ///< highest (odd) harmonic kept
    double tolerance = 1e-12;  ///< on the scalar residual f - f_sat,1
    int max_iterations = 200;
    double damping = 0.5;
};

/// Solves I_temp = V_th / (f Z_th + Z_C) together with f = f_sat,1(i_max / |I_temp|)
/// and assembles the harmonic powers. `z_th_at(1)` must equal src.z_th.
SaturationSolution solve_operating_point(const TheveninSource& src, Complex z_c, double i_max,
                                         const HarmonicImpedance& z_th_at, const SaturationOptions& opts = {});

/// As above with a frequency-flat source impedance.
SaturationSolution solve_operating_point(const TheveninSource& src, Complex z_c, double i_max,
                                         const SaturationOptions& opts = {});

/// Plant form: harmonic impedances come from the plant at n * omega.
SaturationSolution solve_operating_point(const WecPlant& plant, Complex z_c, double i_max,
                                         const SaturationOptions& opts = {});

/// Plant form with the saturated conjugate controller Z_C = conj(Z_th).
SaturationSolution solve_operating_point(const WecPlant& plant, double i_max, const SaturationOptions& opts = {});

/// Power from the fundamental alone.
double classic_sidf_power(const SaturationSolution& solution);

/// Normalized load impedance seen at a harmonic with gain f_sat_n,
/// Z_C / (f_sat_n conj(Z_th)). Empty for f_sat_n = 0 (no current flows).
std::optional<Complex> equivalent_z(Complex z_c, double f_sat_n, Complex z_th);

/// Linear current limiting: the operating point on the optimal current
/// contour with |I_L| = i_max.
OperatingPoint linear_saturation_equivalent(const TheveninSource& src, double i_max);

}  // namespace wecsat
