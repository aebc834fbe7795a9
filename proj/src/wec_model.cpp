#include "wecsat/wec_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wecsat/errors.hpp"

namespace wecsat {
namespace {

constexpr Complex kI{0.0, 1.0};

void require(bool ok, const char* what) {
    if (!ok) throw DomainError(std::string("WecPlant: ") + what);
}

}  // namespace

void WecPlant::validate() const {
    require(std::isfinite(m) && std::isfinite(a_added) && m + a_added > 0.0, "m + a_added must be positive");
    require(b_h > 0.0, "b_h must be positive");
    require(k_h >= 0.0, "k_h must be non-negative");
    require(std::isfinite(g_ratio) && g_ratio != 0.0, "g_ratio must be nonzero");
    require(b_d >= 0.0, "b_d must be non-negative");
    require(std::isfinite(k_d), "k_d must be finite");
    require(k_t > 0.0, "k_t must be positive");
    require(r_w >= 0.0, "r_w must be non-negative");
    require(l_w >= 0.0, "l_w must be non-negative");
    require(p_poles > 0, "p_poles must be positive");
    require(omega > 0.0, "omega must be positive");
    require(g0 == 1 || g0 == 2, "g0 must be 1 (heave) or 2 (surge/pitch)");
    require(std::isfinite(f_e.real()) && std::isfinite(f_e.imag()), "f_e must be finite");
}

Complex WecPlant::mechanical_impedance(double w) const {
    const double g2 = g_ratio * g_ratio;
    const Complex s = kI * w;
    return (b_h + g2 * b_d) + (m + a_added) * s + (k_h + g2 * k_d) / s;
}

Complex WecPlant::winding_impedance(double w) const { return r_w + kI * w * l_w; }

Complex WecPlant::thevenin_impedance(double w) const {
    const Complex zm = mechanical_impedance(w);
    if (std::abs(zm) == 0.0) throw DegenerateError("mechanical impedance vanishes");
    const double kg = k_t * g_ratio;
    return winding_impedance(w) + kg * kg / zm;
}

WecPlant with_haskind_excitation(WecPlant plant, double phase) {
    if (!(plant.j_density > 0.0) || !(plant.k_wavenumber > 0.0)) {
        throw DomainError("Haskind excitation needs positive j_density and k_wavenumber");
    }
    if (!(plant.b_h > 0.0)) throw DomainError("Haskind excitation needs positive b_h");
    const double mag = std::sqrt(8.0 * plant.b_h * plant.g0 * plant.j_density / plant.k_wavenumber);
    plant.f_e = std::polar(mag, phase);
    return plant;
}

bool is_haskind_consistent(const WecPlant& plant, double rtol) {
    if (!(plant.j_density > 0.0) || !(plant.k_wavenumber > 0.0)) return false;
    const double expected = 8.0 * plant.b_h * plant.g0 * plant.j_density / plant.k_wavenumber;
    return std::abs(std::norm(plant.f_e) - expected) <= rtol * expected;
}

void NondimGroups::validate() const {
    if (!(r_cal >= 0.0)) throw DomainError("NondimGroups: r_cal must be non-negative");
    if (!(d_cal > 0.0 && d_cal <= 1.0)) throw DomainError("NondimGroups: d_cal must lie in (0, 1]");
    if (!(l_cal >= 0.0)) throw DomainError("NondimGroups: l_cal must be non-negative");
    if (!std::isfinite(alpha_m)) throw DomainError("NondimGroups: alpha_m must be finite");
}

TheveninSource thevenin_from_plant(const WecPlant& plant) {
    plant.validate();
    const Complex zm = plant.mechanical_impedance();
    if (std::abs(zm) == 0.0) throw DegenerateError("thevenin_from_plant: mechanical impedance vanishes");
    const double kg = plant.k_t * plant.g_ratio;
    TheveninSource src;
    src.z_th = plant.winding_impedance(plant.omega) + kg * kg / zm;
    src.v_th = kg * plant.f_e / zm;
    return src;
}

NondimGroups nondim_from_plant(const WecPlant& plant) {
    plant.validate();
    const double kg = plant.k_t * plant.g_ratio;
    const Complex zm = plant.mechanical_impedance();
    NondimGroups g;
    g.r_cal = plant.r_w * plant.b_h / (kg * kg);
    g.d_cal = plant.b_h / zm.real();
    g.alpha_m = zm.imag() / zm.real();
    if (plant.r_w > 0.0) {
        g.l_cal = plant.omega * plant.l_w / plant.r_w;
    } else if (plant.l_w > 0.0) {
        throw DomainError("nondim_from_plant: omega L / R is undefined for R = 0 with L > 0");
    } else {
        g.l_cal = 0.0;
    }
    return g;
}

double matched_power(const NondimGroups& groups, double j_density, double k_wavenumber, int g0) {
    groups.validate();
    if (!(k_wavenumber > 0.0)) throw DomainError("matched_power: k_wavenumber must be positive");
    const double am2 = 1.0 + groups.alpha_m * groups.alpha_m;
    return (g0 * j_density / k_wavenumber) * groups.d_cal / (1.0 + groups.r_cal / groups.d_cal * am2);
}

double alpha_from_nondim(const NondimGroups& groups) {
    groups.validate();
    const double am2 = 1.0 + groups.alpha_m * groups.alpha_m;
    const double den = groups.r_cal * am2 + groups.d_cal;
    if (den == 0.0) throw DegenerateError("alpha_from_nondim: zero denominator");
    return (groups.l_cal * groups.r_cal * am2 - groups.d_cal * groups.alpha_m) / den;
}

std::pair<double, double> optimal_alpha_m_for_limits(const NondimGroups& groups) {
    groups.validate();
    if (groups.l_cal != 0.0) throw DomainError("optimal_alpha_m_for_limits: requires l_cal = 0");
    if (!(groups.r_cal > 0.0)) throw DomainError("optimal_alpha_m_for_limits: |alpha| is unbounded for r_cal = 0");
    const double a = std::sqrt(1.0 + groups.d_cal / groups.r_cal);
    return {a, -a};
}

OperatingAmplitudes constraint_amplitudes(const WecPlant& plant, Complex z) {
    const TheveninSource src = thevenin_from_plant(plant);
    const Complex z_load = z * std::conj(src.z_th);
    const Complex z_w = plant.winding_impedance(plant.omega);
    const Complex zm = plant.mechanical_impedance();
    const double kg = plant.k_t * plant.g_ratio;

    // Generator-convention form of the position expression: the load sits in
    // series with the winding impedance.
    const Complex series = z_w + z_load;
    if (std::abs(series) == 0.0) throw SingularityError("constraint_amplitudes: winding and load impedances cancel");
    const Complex s = Complex{0.0, plant.omega};
    const Complex velocity = plant.f_e / (zm + kg * kg / series);

    const Complex loop = src.z_th + z_load;
    if (std::abs(loop) == 0.0) throw SingularityError("constraint_amplitudes: load cancels the source impedance");
    const Complex current = src.v_th / loop;
    const Complex voltage = z_load * current;

    const Complex gamma = gamma_from_z(z);
    const double alpha = src.alpha();
    const MatchedBaseline base = matched_baseline(src);
    const double v_r = amplitude_ratio(gamma, alpha, Amplitude::voltage);
    const double i_r = amplitude_ratio(gamma, alpha, Amplitude::current);
    const double p_r = load_power_ratio(gamma, alpha);
    const double swing = v_r * i_r * std::sqrt(1.0 + alpha * alpha);

    OperatingAmplitudes out;
    out.x_amp = velocity / s;
    out.speed_amp = std::abs(plant.g_ratio * velocity);
    out.v_amp = std::abs(voltage);
    out.i_amp = std::abs(current);
    const double d_axis = plant.l_w * plant.p_poles * out.speed_amp * out.i_amp;
    out.v_s_amp = std::sqrt(out.v_amp * out.v_amp + d_axis * d_axis);
    out.s_max = base.p_matched * (p_r + swing);
    out.s_min = base.p_matched * (p_r - swing);
    return out;
}

}  // namespace wecsat
