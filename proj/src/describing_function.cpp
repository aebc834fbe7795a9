#include "wecsat/describing_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wecsat/errors.hpp"

namespace wecsat {
namespace {

constexpr double kPi = std::numbers::pi;

// Scalar closure of the describing-function equations: f - f_sat,1(I(f)).
struct Residual {
    Complex v_th;
    Complex z_th;
    Complex z_c;
    double i_max;

    double target(double f) const {
        const double loop = std::abs(f * z_th + z_c);
        if (std::isinf(i_max)) return 1.0;
        const double i_script = i_max * loop / std::abs(v_th);
        return saturation_factor(1, i_script);
    }
    double operator()(double f) const { return f - target(f); }
};

}  // namespace

double saturation_factor(int n, double i_script) {
    if (n < 1) throw DomainError("saturation_factor: harmonic index must be positive");
    if (std::isnan(i_script) || i_script < 0.0) throw DomainError("saturation_factor: i_script must be positive");
    if (n % 2 == 0) return 0.0;
    if (i_script >= 1.0) return n == 1 ? 1.0 : 0.0;

    const double root = std::sqrt(1.0 - i_script * i_script);
    const double theta = n * std::asin(i_script);
    if (n == 1) return 2.0 / kPi * (i_script * root + theta);
    const double nn = static_cast<double>(n);
    return 4.0 / kPi * (nn * root * std::sin(theta) - i_script * std::cos(theta)) / (nn * (nn * nn - 1.0));
}

SaturationFactors saturation_factors(double i_script, int n_max) {
    SaturationFactors out;
    out.i_script = i_script;
    for (int n = 1; n <= n_max; n += 2) out.factors[n] = saturation_factor(n, i_script);
    return out;
}

SaturationSolution solve_operating_point(const TheveninSource& src, Complex z_c, double i_max,
                                         const HarmonicImpedance& z_th_at, const SaturationOptions& opts) {
    src.validate();
    if (!(i_max > 0.0)) throw DomainError("solve_operating_point: i_max must be positive");
    if (opts.n_harmonics < 1 || opts.n_harmonics % 2 == 0) {
        throw DomainError("solve_operating_point: n_harmonics must be odd and positive");
    }

    const Residual residual{src.v_th, src.z_th, z_c, i_max};
    SaturationSolution sol;
    sol.i_max = i_max;

    // Fixed point from the unsaturated side; the residual is bracketed by
    // r(0) <= 0 <= r(1), so bisection is always available as a fallback.
    double lo = 0.0;
    double hi = 1.0;
    double f = 1.0;
    double r = residual(f);
    sol.residuals.push_back(r);
    bool bisecting = false;
    int stalls = 0;
    int it = 0;
    while (std::abs(r) >= opts.tolerance) {
        if (++it > opts.max_iterations) {
            std::ostringstream msg;
            msg << "solve_operating_point: no convergence after " << opts.max_iterations
                << " iterations, last residual " << r;
            throw ConvergenceError(msg.str(), sol.residuals);
        }
        (r > 0.0 ? hi : lo) = f;
        const double prev = std::abs(r);
        const double next = bisecting ? 0.5 * (lo + hi) : f - opts.damping * r;
        f = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
        r = residual(f);
        sol.residuals.push_back(r);
        if (!bisecting) {
            stalls = std::abs(r) > 0.9 * prev ? stalls + 1 : 0;
            if (stalls >= 2) bisecting = true;
        }
        if (bisecting && hi - lo <= 4.0 * std::numeric_limits<double>::epsilon()) break;
    }

    sol.f_sat1 = f;
    sol.iterations = it;
    sol.converged = true;
    sol.i_temp = src.v_th / (f * src.z_th + z_c);
    sol.psi = std::arg(sol.i_temp);
    const double i_temp_mag = std::abs(sol.i_temp);
    sol.i_script = std::isinf(i_max) ? std::numeric_limits<double>::infinity() : i_max / i_temp_mag;

    for (int n = 1; n <= opts.n_harmonics; n += 2) {
        HarmonicTerm term;
        term.n = n;
        const double fn = n == 1 ? f : saturation_factor(n, sol.i_script);
        const double phase = n * (sol.psi + 0.5 * kPi) - 0.5 * kPi;
        term.current = std::polar(fn * i_temp_mag, phase);
        const Complex source = n == 1 ? src.v_th : Complex{0.0, 0.0};
        term.load_voltage = source - z_th_at(n) * term.current;
        term.power = 0.5 * std::real(term.load_voltage * std::conj(term.current));
        sol.p_total += term.power;
        sol.harmonics.push_back(term);
    }
    return sol;
}

SaturationSolution solve_operating_point(const TheveninSource& src, Complex z_c, double i_max,
                                         const SaturationOptions& opts) {
    const Complex z_th = src.z_th;
    return solve_operating_point(src, z_c, i_max, [z_th](int) { return z_th; }, opts);
}

SaturationSolution solve_operating_point(const WecPlant& plant, Complex z_c, double i_max,
                                         const SaturationOptions& opts) {
    const TheveninSource src = thevenin_from_plant(plant);
    auto z_th_at = [&plant, &src](int n) {
        return n == 1 ? src.z_th : plant.thevenin_impedance(n * plant.omega);
    };
    return solve_operating_point(src, z_c, i_max, z_th_at, opts);
}

SaturationSolution solve_operating_point(const WecPlant& plant, double i_max, const SaturationOptions& opts) {
    const TheveninSource src = thevenin_from_plant(plant);
    return solve_operating_point(plant, std::conj(src.z_th), i_max, opts);
}

double classic_sidf_power(const SaturationSolution& solution) {
    if (!solution.converged || solution.harmonics.empty()) {
        throw DomainError("classic_sidf_power: solution has not converged");
    }
    return solution.fundamental().power;
}

std::optional<Complex> equivalent_z(Complex z_c, double f_sat_n, Complex z_th) {
    if (f_sat_n == 0.0) return std::nullopt;
    if (!(f_sat_n > 0.0)) throw DomainError("equivalent_z: saturation factor must be non-negative");
    return z_c / (f_sat_n * std::conj(z_th));
}

OperatingPoint linear_saturation_equivalent(const TheveninSource& src, double i_max) {
    const MatchedBaseline base = matched_baseline(src);
    const double target = i_max / base.i_peak_matched;
    if (!(target > 0.0) || target > 1.0 + 1e-12) {
        throw DomainError("linear_saturation_equivalent: i_max must lie in (0, |I_L^m|]");
    }
    const double alpha = src.alpha();
    const Complex gamma = gamma_for_amplitude_target(std::min(target, 1.0), alpha, Amplitude::current);
    return operating_point_from_gamma(gamma, alpha);
}

}  // namespace wecsat
