#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "wecsat/errors.hpp"
#include "wecsat/wec_model.hpp"

using namespace wecsat;
using oracle::pi;

namespace {

WecPlant resonant_plant() {
    WecPlant p;
    p.m = 2.0e4;
    p.a_added = 1.0e4;
    p.omega = 0.8;
    p.k_h = (p.m + p.a_added) * p.omega * p.omega;
    p.b_h = 5.0e3;
    p.g_ratio = 1.0;
    p.k_t = 200.0;
    p.r_w = 0.5;
    p.j_density = 2.0e4;
    p.k_wavenumber = p.omega * p.omega / 9.81;
    return with_haskind_excitation(p);
}

}  // namespace

TEST_CASE("plant validation") {
    WecPlant p = resonant_plant();
    CHECK_NOTHROW(p.validate());
    auto broken = [&](auto mutate) {
        WecPlant q = p;
        mutate(q);
        return q;
    };
    CHECK_THROWS_AS(broken([](WecPlant& q) { q.b_h = 0.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](WecPlant& q) { q.m = -q.a_added; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](WecPlant& q) { q.k_t = 0.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](WecPlant& q) { q.r_w = -1.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](WecPlant& q) { q.omega = 0.0; }).validate(), DomainError);
    CHECK_THROWS_AS(broken([](WecPlant& q) { q.g0 = 3; }).validate(), DomainError);
}

TEST_CASE("Thevenin reduction") {
    SUBCASE("resonant plant has a real source impedance") {
        const WecPlant p = resonant_plant();
        const auto src = thevenin_from_plant(p);
        CHECK(src.z_th.real() == doctest::Approx(p.r_w + p.k_t * p.k_t / p.b_h).epsilon(1e-13));
        CHECK(std::abs(src.z_th.imag()) < 1e-9 * src.z_th.real());
    }
    SUBCASE("weak coupling decouples the generator") {
        WecPlant p = resonant_plant();
        p.l_w = 0.01;
        p.k_t = 1e-9;
        const auto src = thevenin_from_plant(p);
        CHECK(std::abs(src.z_th - p.winding_impedance(p.omega)) < 1e-12);
        CHECK(std::abs(src.v_th) < 1e-6);
    }
    SUBCASE("source magnitude and phase") {
        std::mt19937_64 rng(21);
        for (int k = 0; k < 50; ++k) {
            const WecPlant p = oracle::random_plant(rng);
            const auto src = thevenin_from_plant(p);
            const Complex zm = p.mechanical_impedance();
            CHECK(std::abs(src.v_th) ==
                  doctest::Approx(p.k_t * p.g_ratio * std::abs(p.f_e) / std::abs(zm)).epsilon(1e-13));
            CHECK(std::abs(std::remainder(std::arg(src.v_th) - (std::arg(p.f_e) - std::arg(zm)), 2 * pi)) < 1e-12);
        }
    }
    SUBCASE("matched load against the coupled equations") {
        // Locks the sign convention: the conjugate controller extracts the
        // matched power computed from the Thevenin parameters.
        std::mt19937_64 rng(23);
        for (int k = 0; k < 50; ++k) {
            const WecPlant p = oracle::random_plant(rng);
            const auto src = thevenin_from_plant(p);
            const auto direct = oracle::solve_plant(p, std::conj(src.z_th));
            const auto base = matched_baseline(src);
            CHECK(direct.power == doctest::Approx(base.p_matched).epsilon(1e-10));
            CHECK(std::abs(direct.current) == doctest::Approx(base.i_peak_matched).epsilon(1e-10));
            CHECK(std::abs(direct.load_voltage) == doctest::Approx(base.v_peak_matched).epsilon(1e-10));
        }
    }
}

TEST_CASE("nondimensional groups") {
    const WecPlant p = resonant_plant();
    const auto g = nondim_from_plant(p);
    CHECK(g.d_cal == 1.0);
    CHECK(std::abs(g.alpha_m) < 1e-12);
    CHECK(g.r_cal == doctest::Approx(p.r_w * p.b_h / (p.k_t * p.k_t)));
    CHECK(g.l_cal == 0.0);

    SUBCASE("damping-ratio form of the mechanical reactance") {
        std::mt19937_64 rng(25);
        for (int k = 0; k < 100; ++k) {
            const WecPlant q = oracle::random_plant(rng);
            const double mass = q.m + q.a_added;
            const double stiff = q.k_h + q.g_ratio * q.g_ratio * q.k_d;
            const double wn = std::sqrt(stiff / mass);
            const double zeta = q.mechanical_impedance().real() / (2.0 * std::sqrt(mass * stiff));
            const double expected = (q.omega * q.omega - wn * wn) / (2.0 * zeta * q.omega * wn);
            CHECK(std::abs(nondim_from_plant(q).alpha_m - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
        }
    }
    SUBCASE("undefined time-constant ratio") {
        WecPlant q = p;
        q.r_w = 0.0;
        q.l_w = 0.1;
        CHECK_THROWS_AS(nondim_from_plant(q), DomainError);
    }
}

TEST_CASE("matched power from the groups") {
    const double j = 3.0e4, k = 0.05;
    CHECK(matched_power({0.0, 1.0, 0.0, 0.0}, j, k, 1) == doctest::Approx(j / k).epsilon(1e-15));
    CHECK(matched_power({1.0, 1.0, 0.0, 0.0}, j, k, 1) == doctest::Approx(0.5 * j / k).epsilon(1e-15));
    CHECK(matched_power({0.0, 1.0, 0.0, 0.0}, j, k, 2) == doctest::Approx(2.0 * j / k).epsilon(1e-15));
    for (double am : {0.3, 1.0, 4.0}) {
        CHECK(matched_power({0.4, 0.7, am, 0.0}, j, k, 1) == matched_power({0.4, 0.7, -am, 0.0}, j, k, 1));
    }
    SUBCASE("corner maximum") {
        const double best = matched_power({0.0, 1.0, 0.0, 0.0}, j, k, 1);
        for (int a = 0; a <= 50; ++a) {
            for (int b = 1; b <= 20; ++b) {
                for (int c = 0; c <= 40; ++c) {
                    const NondimGroups g{0.1 * a, 0.05 * b, -5.0 + 0.25 * c, 0.0};
                    CHECK(matched_power(g, j, k, 1) <= best);
                }
            }
        }
    }
    CHECK_THROWS_AS(matched_power({0.0, 0.0, 0.0, 0.0}, j, k, 1), DomainError);
}

TEST_CASE("reactance ratio from the groups") {
    CHECK(alpha_from_nondim({0.5, 0.8, 0.0, 0.0}) == 0.0);
    for (double am : {-3.0, 0.5, 2.0}) {
        CHECK(alpha_from_nondim({1e-12, 1.0, am, 0.0}) == doctest::Approx(-am).epsilon(1e-9));
    }
    SUBCASE("two routes") {
        std::mt19937_64 rng(27);
        for (int k = 0; k < 200; ++k) {
            const WecPlant p = oracle::random_plant(rng);
            const double direct = thevenin_from_plant(p).alpha();
            const double groups = alpha_from_nondim(nondim_from_plant(p));
            CHECK(std::abs(direct - groups) <= 1e-12 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST_CASE("reactance-maximizing mechanical tuning") {
    const auto [plus, minus] = optimal_alpha_m_for_limits({1.0, 1.0, 0.0, 0.0});
    CHECK(plus == doctest::Approx(std::sqrt(2.0)));
    CHECK(minus == doctest::Approx(-std::sqrt(2.0)));
    const auto [p2, m2] = optimal_alpha_m_for_limits({1e6, 1e-3, 0.0, 0.0});
    CHECK(p2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(m2 == doctest::Approx(-1.0).epsilon(1e-8));

    SUBCASE("dense sweep") {
        for (const auto& [r, d] : {std::pair{0.2, 1.0}, std::pair{1.0, 0.5}, std::pair{3.0, 0.9}}) {
            const NondimGroups base{r, d, 0.0, 0.0};
            const double step = 1e-4;
            double best_am = 0.0, best = -1.0;
            for (double am = -20.0; am <= 20.0; am += step) {
                const double a = std::abs(alpha_from_nondim({r, d, am, 0.0}));
                if (a > best) {
                    best = a;
                    best_am = am;
                }
            }
            const auto [hi, lo] = optimal_alpha_m_for_limits(base);
            CHECK(std::min(std::abs(best_am - hi), std::abs(best_am - lo)) <= step);
        }
    }
    CHECK_THROWS_AS(optimal_alpha_m_for_limits({0.0, 1.0, 0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(optimal_alpha_m_for_limits({1.0, 1.0, 0.0, 0.5}), DomainError);
}

TEST_CASE("Haskind builder") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 200; ++k) {
        const WecPlant p = oracle::random_plant(rng);
        CHECK(is_haskind_consistent(p));
        const double direct = matched_baseline(thevenin_from_plant(p)).p_matched;
        const double groups = matched_power(nondim_from_plant(p), p.j_density, p.k_wavenumber, p.g0);
        CHECK(direct == doctest::Approx(groups).epsilon(1e-10));
    }
    WecPlant raw = resonant_plant();
    raw.f_e *= 1.5;
    CHECK_FALSE(is_haskind_consistent(raw));
    WecPlant no_climate = raw;
    no_climate.j_density = 0.0;
    CHECK_THROWS_AS(with_haskind_excitation(no_climate), DomainError);
}

TEST_CASE("constraint amplitudes") {
    SUBCASE("no inductance") {
        const WecPlant p = resonant_plant();
        const auto a = constraint_amplitudes(p, {0.6, -0.3});
        CHECK(a.v_s_amp == doctest::Approx(a.v_amp).epsilon(1e-15));
    }
    SUBCASE("matched point") {
        std::mt19937_64 rng(31);
        for (int k = 0; k < 20; ++k) {
            const WecPlant p = oracle::random_plant(rng);
            const auto src = thevenin_from_plant(p);
            const double pm = matched_baseline(src).p_matched;
            const double root = std::sqrt(1.0 + src.alpha() * src.alpha());
            const auto a = constraint_amplitudes(p, 1.0);
            CHECK(a.s_max / pm == doctest::Approx(1.0 + root).epsilon(1e-12));
            CHECK(a.s_min / pm == doctest::Approx(1.0 - root).epsilon(1e-12));
        }
    }
    SUBCASE("against the coupled equations") {
        std::mt19937_64 rng(33);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < 100; ++k) {
            const WecPlant p = oracle::random_plant(rng);
            const auto src = thevenin_from_plant(p);
            const Complex gamma = std::polar(0.9 * u(rng), 2 * pi * u(rng));
            const Complex z = z_from_gamma(gamma);
            const auto a = constraint_amplitudes(p, z);
            const auto direct = oracle::solve_plant(p, z * std::conj(src.z_th));
            const Complex x = direct.velocity / Complex(0.0, p.omega);
            CHECK(std::abs(a.x_amp - x) <= 1e-10 * std::abs(x));
            CHECK(a.i_amp == doctest::Approx(std::abs(direct.current)).epsilon(1e-10));
            CHECK(a.v_amp == doctest::Approx(std::abs(direct.load_voltage)).epsilon(1e-10));
            CHECK(a.v_s_amp >= a.v_amp);
            const double omega_gen = std::abs(p.g_ratio * direct.velocity);
            const double d = p.l_w * p.p_poles * omega_gen * std::abs(direct.current);
            CHECK(a.v_s_amp == doctest::Approx(std::hypot(std::abs(direct.load_voltage), d)).epsilon(1e-10));

            // Extremes of the sampled instantaneous load power.
            double hi = -INFINITY, lo = INFINITY;
            for (int n = 0; n < 20000; ++n) {
                const Complex rot = std::polar(1.0, 2 * pi * n / 20000.0);
                const double pw = std::real(direct.load_voltage * rot) * std::real(direct.current * rot);
                hi = std::max(hi, pw);
                lo = std::min(lo, pw);
            }
            const double scale = std::abs(direct.load_voltage) * std::abs(direct.current);
            CHECK(std::abs(a.s_max - hi) <= 1e-6 * scale);
            CHECK(std::abs(a.s_min - lo) <= 1e-6 * scale);
            CHECK(a.s_max >= a.s_min);

            const double alpha = src.alpha();
            const double pm = matched_baseline(src).p_matched;
            const double swing = 2.0 * amplitude_ratio(gamma, alpha, Amplitude::voltage) *
                                 amplitude_ratio(gamma, alpha, Amplitude::current) * std::sqrt(1 + alpha * alpha) * pm;
            CHECK(a.s_max - a.s_min == doctest::Approx(swing).epsilon(1e-12));
        }
    }
    SUBCASE("load-exclusive position form disagrees with the coupled equations") {
        // Writing the position with (Z_w - z conj(Z_th)) only matches the body
        // equations under the motor sign convention; here it must not.
        WecPlant p = resonant_plant();
        p.l_w = 0.002;
        const auto src = thevenin_from_plant(p);
        const Complex z(0.7, -0.2);
        const double kg = p.k_t * p.g_ratio;
        const Complex s(0.0, p.omega);
        const Complex minus_form =
            (p.f_e / s) / (p.mechanical_impedance() + kg * kg / (p.winding_impedance(p.omega) - z * std::conj(src.z_th)));
        const auto direct = oracle::solve_plant(p, z * std::conj(src.z_th));
        const Complex x = direct.velocity / s;
        CHECK(std::abs(minus_form - x) > 0.1 * std::abs(x));
        CHECK(std::abs(constraint_amplitudes(p, z).x_amp - x) < 1e-10 * std::abs(x));
    }
}
