#pragma once

// Linear impedance-mismatch analysis of a Thevenin source driving a load
// Z_L = z * conj(Z_th).
//
// Phasor convention: every amplitude in this library is a PEAK amplitude,
// x(t) = Re(X e^{i w t}). Average power is therefore 0.5 * Re(V conj(I)),
// and the matched power is |V_th|^2 / (8 Re Z_th). Do not feed RMS values.

#include <complex>
#include <cstddef>
#include <vector>

namespace wecsat {

using Complex = std::complex<double>;

/// Which load amplitude a ratio refers to. Voltage corresponds to the sign
/// +1 in the ratio and optimal-angle expressions, current to -1.
enum class Amplitude { voltage, current };

constexpr double sign_of(Amplitude a) noexcept { return a == Amplitude::voltage ? 1.0 : -1.0; }

struct TheveninSource {
    Complex v_th;  ///< source voltage phasor [V, peak]
    Complex z_th;  ///< source impedance [ohm]

    /// Reactance ratio Im(Z_th) / Re(Z_th).
    double alpha() const { return z_th.imag() / z_th.real(); }

    /// Throws DomainError unless Re(z_th) > 0 and |v_th| > 0.
    void validate() const;
};

struct MatchedBaseline {
    double p_matched;       ///< [W]
    double v_peak_matched;  ///< [V]
    double i_peak_matched;  ///< [A]
};

struct OperatingPoint {
    Complex z;
    Complex gamma;
    double power_ratio;       ///< 1 - |gamma|^2
    double v_ratio;
    double i_ratio;
    double load_power_ratio;  ///< exact circuit power ratio, see load_power_ratio()
};

struct ParetoPoint {
    double power_ratio;
    double v_ratio;
    double i_ratio;
};

struct SmithCell {
    Complex gamma;
    double power_ratio;
    double v_ratio;
    double i_ratio;
    bool v_exceeds_one;
    bool i_exceeds_one;
};

/// Polar grid over the unit Gamma disk, stored ray-major: cell (r, a) lives
/// at index r * angular + a. Radius r / (radial - 1), angle -pi + 2 pi a / angular.
struct SmithGrid {
    double alpha = 0.0;
    std::size_t radial = 0;
    std::size_t angular = 0;
    std::vector<SmithCell> cells;

    const SmithCell& at(std::size_t r, std::size_t a) const { return cells[r * angular + a]; }
};

MatchedBaseline matched_baseline(const TheveninSource& src);

Complex gamma_from_z(Complex z);
Complex z_from_gamma(Complex gamma);

/// Average power relative to the matched case, 1 - |Gamma|^2. Rejects
/// |Gamma| > 1 (active loads).
double power_ratio(Complex gamma);

/// Exact average power ratio of the circuit with Z_L = z conj(Z_th):
///   (1 - |G|^2 + 2 a Im G) / (a^2 |G|^2 + 2 a Im G + 1).
/// Coincides with power_ratio() for a resistive source (alpha = 0); for
/// reactive sources the two differ away from Gamma = 0.
double load_power_ratio(Complex gamma, double alpha);

/// |V_L| / |V_L^m| (voltage) or |I_L| / |I_L^m| (current).
double amplitude_ratio(Complex gamma, double alpha, Amplitude which);

/// Angle of Gamma minimizing amplitude_ratio at fixed |Gamma|, in (-pi, pi].
double optimal_angle(double gamma_mag, double alpha, Amplitude which);

/// Gamma on the optimal contour whose amplitude ratio equals `target_ratio`,
/// choosing the smallest |Gamma| (largest power ratio).
Complex gamma_for_amplitude_target(double target_ratio, double alpha, Amplitude which);

OperatingPoint operating_point_from_gamma(Complex gamma, double alpha);
OperatingPoint operating_point_from_z(Complex z, double alpha);

/// Nondominated (power, voltage, current) triples from both optimal contours,
/// sorted by power ratio, highest first.
std::vector<ParetoPoint> pareto_front(double alpha, std::size_t n_points);

SmithGrid smith_grid(double alpha, std::size_t radial = 101, std::size_t angular = 360);

}  // namespace wecsat
