#include "wecsat/mismatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wecsat/errors.hpp"

namespace wecsat {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// |Gamma| may exceed one by rounding when built from polar coordinates.
constexpr double kUnitDiskSlack = 1e-12;

double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

double contour_ratio(double mag, double alpha, Amplitude which) {
    const double angle = optimal_angle(mag, alpha, which);
    return amplitude_ratio(std::polar(mag, angle), alpha, which);
}

}  // namespace

void TheveninSource::validate() const {
    if (!(z_th.real() > 0.0)) {
        std::ostringstream msg;
        msg << "Thevenin impedance must have positive real part, got " << z_th;
        throw DomainError(msg.str());
    }
    if (!(std::abs(v_th) > 0.0)) throw DomainError("Thevenin voltage must be nonzero");
}

MatchedBaseline matched_baseline(const TheveninSource& src) {
    src.validate();
    const double re = src.z_th.real();
    const double v = std::abs(src.v_th);
    return {v * v / (8.0 * re), v * std::abs(src.z_th) / (2.0 * re), v / (2.0 * re)};
}

Complex gamma_from_z(Complex z) {
    const Complex den = z + 1.0;
    if (std::abs(den) <= kEps) throw SingularityError("gamma_from_z: z = -1 has no reflection coefficient");
    return (z - 1.0) / den;
}

Complex z_from_gamma(Complex gamma) {
    const Complex den = 1.0 - gamma;
    if (std::abs(den) <= kEps) throw SingularityError("z_from_gamma: Gamma = 1 is an open circuit");
    return (1.0 + gamma) / den;
}

double power_ratio(Complex gamma) {
    const double g2 = std::norm(gamma);
    if (g2 > 1.0 + kUnitDiskSlack) throw DomainError("power_ratio: |Gamma| > 1 describes an active load");
    return 1.0 - g2;
}

double load_power_ratio(Complex gamma, double alpha) {
    const double g2 = std::norm(gamma);
    if (g2 > 1.0 + kUnitDiskSlack) throw DomainError("load_power_ratio: |Gamma| > 1 describes an active load");
    const double cross = 2.0 * alpha * gamma.imag();
    const double den = alpha * alpha * g2 + cross + 1.0;
    if (den <= 16.0 * kEps * (alpha * alpha * g2 + 1.0)) {
        throw SingularityError("load_power_ratio: load cancels the source impedance");
    }
    return (1.0 - g2 + cross) / den;
}

double amplitude_ratio(Complex gamma, double alpha, Amplitude which) {
    const double g2 = std::norm(gamma);
    const double num = g2 + 2.0 * sign_of(which) * gamma.real() + 1.0;
    const double den = alpha * alpha * g2 + 2.0 * alpha * gamma.imag() + 1.0;
    if (den <= 16.0 * kEps * (alpha * alpha * g2 + 1.0)) {
        std::ostringstream msg;
        msg << "amplitude_ratio: vanishing denominator at Gamma = " << gamma << ", alpha = " << alpha;
        throw SingularityError(msg.str());
    }
    return std::sqrt(std::max(num, 0.0) / den);
}

double optimal_angle(double gamma_mag, double alpha, Amplitude which) {
    if (!(gamma_mag >= 0.0 && gamma_mag <= 1.0 + kUnitDiskSlack)) {
        throw DomainError("optimal_angle: |Gamma| must lie in [0, 1]");
    }
    const double eps = sign_of(which);
    const double g2 = gamma_mag * gamma_mag;
    const double a2g2 = alpha * alpha * g2 + 1.0;
    const double sigma = std::sqrt(a2g2 * a2g2 + alpha * alpha * (g2 + 1.0) * (g2 + 1.0));
    // Stationarity of the ratio in the angle reads
    //   eps (a^2 g^2 + 1) sin(phi) + a (g^2 + 1) cos(phi) = -2 eps a g.
    const double first = 2.0 * std::atan(a2g2 / (sigma + eps * alpha * (1.0 + g2)));
    const double second = eps * std::acos(std::clamp(-2.0 * alpha * gamma_mag / sigma, -1.0, 1.0));
    return wrap_angle(first + second);
}

Complex gamma_for_amplitude_target(double target_ratio, double alpha, Amplitude which) {
    if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
        throw DomainError("gamma_for_amplitude_target: target ratio must lie in (0, 1]");
    }
    if (target_ratio == 1.0) return {0.0, 0.0};

    // The contour ratio starts at 1 for |Gamma| = 0. Scan for the first
    // crossing rather than assuming monotonicity, then bisect.
    constexpr int kScan = 64;
    double lo = 0.0;
    double hi = -1.0;
    for (int k = 1; k <= kScan; ++k) {
        const double mag = static_cast<double>(k) / kScan;
        double h;
        try {
            h = contour_ratio(mag, alpha, which) - target_ratio;
        } catch (const SingularityError&) {
            continue;
        }
        if (h <= 0.0) {
            hi = mag;
            break;
        }
        lo = mag;
    }
    if (hi < 0.0) {
        std::ostringstream msg;
        msg << "gamma_for_amplitude_target: ratio " << target_ratio << " not reachable for alpha = " << alpha;
        throw InfeasibleError(msg.str());
    }
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double h = contour_ratio(mid, alpha, which) - target_ratio;
        if (std::abs(h) < 1e-13) {
            lo = hi = mid;
            break;
        }
        (h > 0.0 ? lo : hi) = mid;
    }
    const double mag = hi;
    return std::polar(mag, optimal_angle(mag, alpha, which));
}

OperatingPoint operating_point_from_gamma(Complex gamma, double alpha) {
    OperatingPoint op;
    op.gamma = gamma;
    op.z = z_from_gamma(gamma);
    op.power_ratio = power_ratio(gamma);
    op.v_ratio = amplitude_ratio(gamma, alpha, Amplitude::voltage);
    op.i_ratio = amplitude_ratio(gamma, alpha, Amplitude::current);
    op.load_power_ratio = load_power_ratio(gamma, alpha);
    return op;
}

OperatingPoint operating_point_from_z(Complex z, double alpha) {
    OperatingPoint op = operating_point_from_gamma(gamma_from_z(z), alpha);
    op.z = z;
    return op;
}

std::vector<ParetoPoint> pareto_front(double alpha, std::size_t n_points) {
    if (n_points < 2) throw DomainError("pareto_front: need at least two points");

    std::vector<ParetoPoint> candidates;
    candidates.reserve(2 * n_points);
    for (std::size_t k = 0; k < n_points; ++k) {
        const double mag = static_cast<double>(k) / static_cast<double>(n_points - 1);
        for (Amplitude which : {Amplitude::voltage, Amplitude::current}) {
            const Complex gamma = std::polar(mag, optimal_angle(mag, alpha, which));
            try {
                candidates.push_back({1.0 - mag * mag, amplitude_ratio(gamma, alpha, Amplitude::voltage),
                                      amplitude_ratio(gamma, alpha, Amplitude::current)});
            } catch (const SingularityError&) {
                // The contour passes through the source resonance only at an
                // unbounded amplitude; such a point is never on the front.
            }
        }
    }

    auto dominates = [](const ParetoPoint& a, const ParetoPoint& b) {
        const bool no_worse = a.power_ratio >= b.power_ratio && a.v_ratio <= b.v_ratio && a.i_ratio <= b.i_ratio;
        const bool better = a.power_ratio > b.power_ratio || a.v_ratio < b.v_ratio || a.i_ratio < b.i_ratio;
        return no_worse && better;
    };

    std::vector<ParetoPoint> front;
    for (const auto& c : candidates) {
        const bool dominated =
            std::any_of(candidates.begin(), candidates.end(), [&](const ParetoPoint& o) { return dominates(o, c); });
        const bool duplicate = std::any_of(front.begin(), front.end(), [&](const ParetoPoint& f) {
            return f.power_ratio == c.power_ratio && f.v_ratio == c.v_ratio && f.i_ratio == c.i_ratio;
        });
        if (!dominated && !duplicate) front.push_back(c);
    }
    std::stable_sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        if (a.power_ratio != b.power_ratio) return a.power_ratio > b.power_ratio;
        if (a.v_ratio != b.v_ratio) return a.v_ratio < b.v_ratio;
        return a.i_ratio < b.i_ratio;
    });
    return front;
}

SmithGrid smith_grid(double alpha, std::size_t radial, std::size_t angular) {
    if (radial < 2 || angular < 2) throw DomainError("smith_grid: resolution must be at least 2");
    SmithGrid grid;
    grid.alpha = alpha;
    grid.radial = radial;
    grid.angular = angular;
    grid.cells.reserve(radial * angular);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < radial; ++r) {
        const double mag = static_cast<double>(r) / static_cast<double>(radial - 1);
        for (std::size_t a = 0; a < angular; ++a) {
            const double angle = -kPi + 2.0 * kPi * static_cast<double>(a) / static_cast<double>(angular);
            SmithCell cell;
            cell.gamma = std::polar(mag, angle);
            cell.power_ratio = 1.0 - mag * mag;
            try {
                cell.v_ratio = amplitude_ratio(cell.gamma, alpha, Amplitude::voltage);
                cell.i_ratio = amplitude_ratio(cell.gamma, alpha, Amplitude::current);
            } catch (const SingularityError&) {
                cell.v_ratio = cell.i_ratio = kInf;
            }
            cell.v_exceeds_one = cell.v_ratio > 1.0;
            cell.i_exceeds_one = cell.i_ratio > 1.0;
            grid.cells.push_back(cell);
        }
    }
    return grid;
}

}  // namespace wecsat
