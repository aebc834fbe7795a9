#include "wecsat/time_domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "wecsat/csv.hpp"
#include "wecsat/errors.hpp"

namespace wecsat {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

using State = std::array<double, 4>;  // x, v, xi, i_wind

double relative_error(double estimate, double reference) {
    return std::abs(estimate - reference) / std::abs(reference);
}

// Routh-Hurwitz test on a polynomial given by descending coefficients.
bool hurwitz(std::vector<double> coeffs) {
    while (!coeffs.empty() && coeffs.front() == 0.0) coeffs.erase(coeffs.begin());
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();  // roots at s = 0 are marginal, not unstable
    if (coeffs.size() <= 1) return true;
    if (coeffs.front() < 0.0) {
        for (double& c : coeffs) c = -c;
    }
    if (std::any_of(coeffs.begin(), coeffs.end(), [](double c) { return c <= 0.0; })) return false;

    const std::size_t n = coeffs.size();
    std::vector<double> upper, lower;
    for (std::size_t k = 0; k < n; k += 2) upper.push_back(coeffs[k]);
    for (std::size_t k = 1; k < n; k += 2) lower.push_back(coeffs[k]);
    for (std::size_t row = 2; row < n; ++row) {
        if (lower.empty() || lower.front() <= 0.0) return false;
        std::vector<double> next;
        for (std::size_t k = 0; k + 1 < upper.size(); ++k) {
            const double b = k + 1 < lower.size() ? lower[k + 1] : 0.0;
            next.push_back((lower.front() * upper[k + 1] - upper.front() * b) / lower.front());
        }
        upper = std::move(lower);
        lower = std::move(next);
    }
    return lower.empty() || lower.front() > 0.0;
}

class Simulator {
public:
    Simulator(const WecPlant& plant, Complex z_c, double i_max, const SimConfig& cfg)
        : mass_(plant.m + plant.a_added),
          damping_(plant.b_h + plant.g_ratio * plant.g_ratio * plant.b_d),
          stiffness_(plant.k_h + plant.g_ratio * plant.g_ratio * plant.k_d),
          coupling_(plant.k_t * plant.g_ratio),
          r_(plant.r_w),
          l_(plant.l_w),
          b_c_(z_c.real()),
          filter_pole_(0.0),
          i_max_(i_max),
          omega_(plant.omega),
          f_e_(plant.f_e),
          loop_tol_(cfg.algebraic_loop_tol) {
        if (b_c_ == 0.0) throw DomainError("simulate: controller needs a nonzero real part for feedthrough");
        const double k_c = -plant.omega * z_c.imag();
        filter_pole_ = k_c / b_c_;

        // Closed loop (L s^2 + (R + B_c) s + K_c)(M s^2 + B s + K) + (k_t g)^2 s^2.
        const std::array<double, 3> electrical{l_, r_ + b_c_, k_c};
        const std::array<double, 3> mechanical{mass_, damping_, stiffness_};
        std::vector<double> poly(5, 0.0);
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) poly[a + b] += electrical[a] * mechanical[b];
        }
        poly[2] += coupling_ * coupling_;
        if (!hurwitz(poly)) {
            std::ostringstream msg;
            msg << "simulate: closed loop with Z_C = " << z_c << " is unstable";
            throw DomainError(msg.str());
        }
    }

    struct Outputs {
        double i;
        double v_load;
        double di;
    };

    double excitation(double t) const { return std::real(f_e_ * std::polar(1.0, omega_ * t)); }

    Outputs outputs(const State& y) const {
        const double emf = coupling_ * y[1];
        if (l_ > 0.0) {
            const double i = clamp(y[3]);
            double di = (emf - (r_ + b_c_) * i - filter_pole_ * y[2]) / l_;
            if (std::abs(i) >= i_max_ && di * i > 0.0) di = 0.0;
            return {i, emf - r_ * i - l_ * di, di};
        }
        const double i = solve_loop(emf, y[2]);
        return {i, emf - r_ * i, 0.0};
    }

    State derivative(double t, const State& y) const {
        const Outputs o = outputs(y);
        State dy{};
        dy[0] = y[1];
        dy[1] = (excitation(t) - damping_ * y[1] - stiffness_ * y[0] - coupling_ * o.i) / mass_;
        dy[2] = -filter_pole_ * y[2] + o.v_load;
        dy[3] = o.di;
        return dy;
    }

    void step(double t, double dt, State& y) const {
        auto axpy = [](const State& a, double h, const State& b) {
            State r;
            for (std::size_t k = 0; k < r.size(); ++k) r[k] = a[k] + h * b[k];
            return r;
        };
        const State k1 = derivative(t, y);
        const State k2 = derivative(t + 0.5 * dt, axpy(y, 0.5 * dt, k1));
        const State k3 = derivative(t + 0.5 * dt, axpy(y, 0.5 * dt, k2));
        const State k4 = derivative(t + dt, axpy(y, dt, k3));
        for (std::size_t k = 0; k < y.size(); ++k) y[k] += dt / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        if (l_ > 0.0) y[3] = clamp(y[3]);
    }

    State linear_initial_state(const TheveninSource& src, const WecPlant& plant, Complex z_c) const {
        const Complex s{0.0, omega_};
        const Complex current = src.v_th / (src.z_th + z_c);
        const Complex velocity = (f_e_ - coupling_ * current) / plant.mechanical_impedance();
        const Complex v_load = z_c * current;
        const Complex xi = v_load / (s + filter_pole_);
        return {std::real(velocity / s), velocity.real(), xi.real(), l_ > 0.0 ? clamp(current.real()) : 0.0};
    }

    double damping() const { return damping_; }
    double resistance() const { return r_; }

private:
    double clamp(double i) const { return std::isinf(i_max_) ? i : std::clamp(i, -i_max_, i_max_); }

    // Solves i = sat(u - beta i) for the L = 0 loop, where
    // u = (emf - (K_c/B_c) xi) / B_c and beta = R / B_c.
    double solve_loop(double emf, double xi) const {
        const double u = (emf - filter_pole_ * xi) / b_c_;
        const double beta = r_ / b_c_;
        if (1.0 + beta == 0.0) throw AlgebraicLoopError("simulate: controller cancels the winding resistance");
        const double linear = u / (1.0 + beta);
        if (std::isinf(i_max_)) return linear;

        const double slack = loop_tol_ * i_max_;
        std::array<double, 3> found{};
        std::size_t count = 0;
        if (std::abs(linear) <= i_max_ + slack) found[count++] = std::clamp(linear, -i_max_, i_max_);
        for (double bound : {i_max_, -i_max_}) {
            const double demand = u - beta * bound;
            if (demand * (bound > 0.0 ? 1.0 : -1.0) >= i_max_ - slack) {
                if (count == 0 || std::abs(found[0] - bound) > slack) found[count++] = bound;
            }
        }
        if (count != 1) {
            std::ostringstream msg;
            msg << "simulate: current loop has " << count << " consistent branches (u = " << u << ")";
            throw AlgebraicLoopError(msg.str());
        }
        return found[0];
    }

    double mass_;
    double damping_;
    double stiffness_;
    double coupling_;
    double r_;
    double l_;
    double b_c_;
    double filter_pole_;
    double i_max_;
    double omega_;
    Complex f_e_;
    double loop_tol_;
};

std::string describe(double t, const State& y) {
    std::ostringstream ss;
    ss << "t=" << t << " x=" << y[0] << " v=" << y[1] << " xi=" << y[2] << " i=" << y[3];
    return ss.str();
}

}  // namespace

void SimConfig::validate() const {
    if (steps_per_period < 100) throw DomainError("SimConfig: steps_per_period must be at least 100");
    if (transient_periods < 0) throw DomainError("SimConfig: transient_periods must be non-negative");
    if (n_periods <= transient_periods) throw DomainError("SimConfig: n_periods must exceed transient_periods");
    if (!(convergence_tol > 0.0)) throw DomainError("SimConfig: convergence_tol must be positive");
    if (!(algebraic_loop_tol > 0.0)) throw DomainError("SimConfig: algebraic_loop_tol must be positive");
    if (n_harmonics < 1) throw DomainError("SimConfig: n_harmonics must be positive");
}

SimResult simulate(const WecPlant& plant, Complex z_c, double i_max, const SimConfig& cfg) {
    plant.validate();
    cfg.validate();
    if (!(i_max > 0.0)) throw DomainError("simulate: i_max must be positive (use infinity for no limit)");

    const TheveninSource src = thevenin_from_plant(plant);
    const Simulator sim(plant, z_c, i_max, cfg);

    State y{};
    if (cfg.initial) {
        y = {cfg.initial->x, cfg.initial->v, cfg.initial->xi, plant.l_w > 0.0 ? cfg.initial->i_wind : 0.0};
    } else {
        y = sim.linear_initial_state(src, plant, z_c);
    }

    const int n = cfg.steps_per_period;
    const double period = 2.0 * kPi / plant.omega;
    const double dt = period / n;

    SimResult result;
    result.omega = plant.omega;
    Waveforms window;
    double p_exc = 0.0, p_mech = 0.0, p_wind = 0.0;

    long step_index = 0;
    for (int p = 0; p < cfg.n_periods; ++p) {
        window = Waveforms{};
        p_exc = p_mech = p_wind = 0.0;
        double p_sum = 0.0;
        for (int k = 0; k < n; ++k, ++step_index) {
            const double t = static_cast<double>(step_index) * dt;
            const auto o = sim.outputs(y);
            window.t.push_back(t);
            window.x.push_back(y[0]);
            window.v.push_back(y[1]);
            window.i.push_back(o.i);
            window.v_load.push_back(o.v_load);
            window.p_inst.push_back(o.v_load * o.i);
            p_sum += o.v_load * o.i;
            p_exc += sim.excitation(t) * y[1];
            p_mech += sim.damping() * y[1] * y[1];
            p_wind += sim.resistance() * o.i * o.i;

            const State before = y;
            sim.step(t, dt, y);
            if (!std::all_of(y.begin(), y.end(), [](double s) { return std::isfinite(s); })) {
                throw DivergenceError("simulate: non-finite state", {describe(t, before), describe(t + dt, y)});
            }
        }
        const double p_period = p_sum / n;
        result.period_powers.push_back(p_period);
        result.periods_run = p + 1;
        if (p >= cfg.transient_periods && p > 0) {
            const double prev = result.period_powers[p - 1];
            if (std::abs(p_period - prev) <= cfg.convergence_tol * std::abs(p_period)) {
                result.converged = true;
                break;
            }
        }
    }

    result.p_avg = result.period_powers.back();
    result.p_excitation = p_exc / n;
    result.p_mechanical_loss = p_mech / n;
    result.p_winding_loss = p_wind / n;
    result.waveforms = std::move(window);

    const auto& w = result.waveforms;
    const auto [x_lo, x_hi] = std::minmax_element(w.x.begin(), w.x.end());
    result.x_amp = 0.5 * (*x_hi - *x_lo);
    result.peak_current = 0.0;
    for (double i : w.i) result.peak_current = std::max(result.peak_current, std::abs(i));

    const auto currents = harmonic_decompose(w.t, w.i, plant.omega, cfg.n_harmonics);
    result.harmonic_currents = currents.phasors;
    result.dc_current = currents.dc;
    result.x_fundamental = harmonic_decompose(w.t, w.x, plant.omega, 1).phasors.front();
    return result;
}

HarmonicDecomposition harmonic_decompose(std::span<const double> t, std::span<const double> y, double omega,
                                         int n_max) {
    if (t.size() != y.size() || t.size() < 2) throw WindowingError("harmonic_decompose: mismatched or empty record");
    if (n_max < 1) throw DomainError("harmonic_decompose: n_max must be positive");
    const std::size_t count = t.size();
    const double dt = (t.back() - t.front()) / static_cast<double>(count - 1);
    const double span = dt * static_cast<double>(count);
    const double periods = span * omega / (2.0 * kPi);
    if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods) || std::round(periods) < 1.0) {
        std::ostringstream msg;
        msg << "harmonic_decompose: window spans " << periods << " periods, not an integer";
        throw WindowingError(msg.str());
    }

    HarmonicDecomposition out;
    double dc = 0.0;
    for (double v : y) dc += v;
    out.dc = dc / static_cast<double>(count);
    out.phasors.assign(static_cast<std::size_t>(n_max), Complex{});
    for (int h = 1; h <= n_max; ++h) {
        Complex acc{};
        for (std::size_t k = 0; k < count; ++k) acc += y[k] * std::polar(1.0, -h * omega * t[k]);
        out.phasors[static_cast<std::size_t>(h - 1)] = 2.0 * acc / static_cast<double>(count);
    }
    return out;
}

HarmonicDecomposition harmonic_decompose(const SimResult& result, int n_max) {
    return harmonic_decompose(result.waveforms.t, result.waveforms.i, result.omega, n_max);
}

void write_waveforms_csv(std::ostream& out, const SimResult& result) {
    write_csv_header(out, {"t", "x", "v", "i", "v_load", "p_inst"});
    const auto& w = result.waveforms;
    for (std::size_t k = 0; k < w.t.size(); ++k) {
        CsvRow row;
        row << w.t[k] << w.x[k] << w.v[k] << w.i[k] << w.v_load[k] << w.p_inst[k];
        write_csv_row(out, row);
    }
}

double low_pass_figure_of_merit(const WecPlant& plant) {
    return std::abs(plant.thevenin_impedance(plant.omega)) / std::abs(plant.thevenin_impedance(3.0 * plant.omega));
}

ValidationReport validate_df(const WecPlant& plant, double i_max, const SimConfig& cfg,
                             const SaturationOptions& opts) {
    const TheveninSource src = thevenin_from_plant(plant);
    const Complex z_c = std::conj(src.z_th);
    const MatchedBaseline base = matched_baseline(src);

    const SaturationSolution df = solve_operating_point(plant, z_c, i_max, opts);
    SimConfig sim_cfg = cfg;
    sim_cfg.n_harmonics = std::max(sim_cfg.n_harmonics, opts.n_harmonics);
    const SimResult sim = simulate(plant, z_c, i_max, sim_cfg);

    ValidationReport rep;
    rep.i_max = i_max;
    rep.i_max_fraction = i_max / base.i_peak_matched;
    rep.saturated = df.f_sat1 < 1.0;
    rep.figure_of_merit = low_pass_figure_of_merit(plant);
    rep.low_pass = rep.figure_of_merit >= ValidationThresholds::low_pass;
    rep.assumption_violated = rep.saturated && rep.figure_of_merit < ValidationThresholds::broadband;
    rep.sim_converged = sim.converged;

    rep.p_df = df.p_total;
    rep.p_sim = sim.p_avg;
    rep.power_error = relative_error(rep.p_df, rep.p_sim);
    rep.i1_df = std::abs(df.fundamental().current);
    rep.i1_sim = std::abs(sim.harmonic_currents.front());
    rep.current_error = relative_error(rep.i1_df, rep.i1_sim);

    // Position from the fundamental circuit with the equivalent load z_1.
    const auto z1 = equivalent_z(z_c, df.f_sat1, src.z_th);
    rep.x_df = std::abs(constraint_amplitudes(plant, *z1).x_amp);
    rep.x_sim = std::abs(sim.x_fundamental);
    rep.position_error = relative_error(rep.x_df, rep.x_sim);

    if (rep.saturated) {
        rep.passed = rep.sim_converged && rep.power_error < ValidationThresholds::saturated_power &&
                     rep.current_error < ValidationThresholds::saturated_current;
    } else {
        rep.passed = rep.sim_converged && rep.power_error < ValidationThresholds::unsaturated &&
                     rep.current_error < ValidationThresholds::unsaturated &&
                     rep.position_error < ValidationThresholds::unsaturated;
    }
    return rep;
}

}  // namespace wecsat
