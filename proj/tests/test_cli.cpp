#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>
#include <unistd.h>

#include "oracles.hpp"
#include "wecsat/commands.hpp"
#include "wecsat/config.hpp"
#include "wecsat/csv.hpp"
#include "wecsat/describing_function.hpp"
#include "wecsat/errors.hpp"
#include "wecsat/mismatch.hpp"

using namespace wecsat;
using oracle::pi;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

// Fresh scratch directory per use, removed on destruction.
struct Scratch {
    fs::path dir;
    Scratch() {
        static int counter = 0;
        dir = fs::temp_directory_path() /
              ("wecsat_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;
};

CsvTable read_table(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    return read_csv(in);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::map<std::string, double> quantities(const CsvTable& t) {
    std::map<std::string, double> q;
    for (std::size_t r = 0; r < t.rows.size(); ++r) q[t.rows[r][0]] = t.number(r, "value");
    return q;
}

// Low-pass unit buoy, raw excitation.
const char* kLowPassPlant = R"(
[plant]
m = 0.9
k_h = 1
omega = 1
b_h = 0.1
k_t = 1
r_w = 0.02
f_e_mag = 1
excitation = raw
)";

// Winding resistance dominates; Z_th nearly flat.
const char* kBroadbandPlant = R"(
[plant]
m = 0.8
k_h = 1
omega = 1
b_h = 0.1
k_t = 1
r_w = 20
f_e_mag = 1
excitation = raw
)";

const char* kFastSim = R"(
[sim]
steps_per_period = 1000
n_periods = 30
transient_periods = 10
)";

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("defaults and lists") {
        const auto cfg = parse("[sweep]\nalpha = 0.5, 2 # trailing comment\n; whole-line comment\ngamma_points = 11\n");
        CHECK(cfg.sweep.alpha == std::vector<double>{0.5, 2.0});
        CHECK(cfg.sweep.gamma_points == 11);
        CHECK(cfg.sweep.angle_points == SweepConfig{}.angle_points);
        CHECK_FALSE(cfg.plant);
    }
    SUBCASE("haskind excitation from the wave climate") {
        const auto cfg = parse("[plant]\nm = 1e4\nb_h = 2e3\nk_h = 3e4\nomega = 1\nk_t = 100\nr_w = 1\n"
                               "j_density = 2e4\nk_wavenumber = 0.1\n");
        REQUIRE(cfg.plant);
        CHECK(is_haskind_consistent(*cfg.plant));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse("[sweep]\nalpah = 1\n"), ConfigError);
        CHECK_THROWS_AS(parse("[sweeps]\n"), ConfigError);
        CHECK_THROWS_AS(parse("[sweep]\ngamma_points = 5\ngamma_points = 6\n"), ConfigError);
        CHECK_THROWS_AS(parse("[sweep]\ngamma_points = many\n"), ConfigError);
        CHECK_THROWS_AS(parse("gamma_points = 5\n"), ConfigError);
        CHECK_THROWS_AS(parse("[sweep]\nalpha =\n"), ConfigError);
        CHECK_THROWS_AS(parse(std::string(kLowPassPlant) + "[nondim]\nr_cal = 1\n"), ConfigError);
        CHECK_THROWS_AS(parse("[plant]\nm = -1\nb_h = 1\nk_h = 1\nf_e_mag = 1\n"), ConfigError);
        CHECK_THROWS_AS(parse("[plant]\nm = 1\nb_h = 1\nk_h = 1\nj_density = 1\nk_wavenumber = 1\nf_e_mag = 1\n"),
                        ConfigError);
    }
    SUBCASE("error names the line") {
        try {
            parse("[sweep]\n\ngamma_points = 5\nbogus = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find('4') != std::string::npos);
        }
    }
}

TEST_CASE("matched command") {
    SUBCASE("ideal heave body") {
        Scratch s;
        const auto cfg = parse("[nondim]\nr_cal = 0\nd_cal = 1\nalpha_m = 0\nj_density = 3e4\nk_wavenumber = 0.05\n");
        cmd_matched(cfg, s.dir);
        const auto q = quantities(read_table(s.dir / "matched.csv"));
        CHECK(q.at("p_matched_nondim") == doctest::Approx(3e4 / 0.05).epsilon(1e-12));
        CHECK(q.at("alpha_nondim") == 0.0);
    }
    SUBCASE("dimensional plant agrees with its groups") {
        std::mt19937_64 rng(71);
        for (int k = 0; k < 5; ++k) {
            const WecPlant p = oracle::random_plant(rng);
            std::ostringstream text;
            text.precision(17);
            text << "[plant]\nm = " << p.m << "\na_added = " << p.a_added << "\nb_h = " << p.b_h
                 << "\nk_h = " << p.k_h << "\ng_ratio = " << p.g_ratio << "\nb_d = " << p.b_d << "\nk_d = " << p.k_d
                 << "\nk_t = " << p.k_t << "\nr_w = " << p.r_w << "\nl_w = " << p.l_w << "\np_poles = " << p.p_poles
                 << "\nomega = " << p.omega << "\nj_density = " << p.j_density << "\nk_wavenumber = "
                 << p.k_wavenumber << "\ng0 = " << p.g0 << "\n";
            Scratch s;
            cmd_matched(parse(text.str()), s.dir);
            const auto q = quantities(read_table(s.dir / "matched.csv"));
            // 12 significant digits in the file.
            CHECK(q.at("p_matched_nondim") == doctest::Approx(q.at("p_matched")).epsilon(1e-10));
            CHECK(q.at("alpha_nondim") == doctest::Approx(q.at("alpha")).epsilon(1e-10));
            CHECK(q.at("p_matched") == doctest::Approx(matched_baseline(thevenin_from_plant(p)).p_matched).epsilon(1e-10));
        }
    }
    SUBCASE("missing plant") {
        Scratch s;
        CHECK_THROWS_AS(cmd_matched(RunConfig{}, s.dir), ConfigError);
        CHECK_THROWS_AS(cmd_saturate(RunConfig{}, s.dir), ConfigError);
        CHECK_THROWS_AS(cmd_verify(parse("[nondim]\nr_cal = 1\n"), s.dir), ConfigError);
    }
}

TEST_CASE("smith command") {
    Scratch s;
    const auto cfg = parse("[sweep]\nalpha = 0, 1.5\ngamma_points = 11\nangle_points = 24\n[output]\nsvg = true\n");
    const auto report = cmd_smith(cfg, s.dir);
    CHECK(report.files.size() == 4);
    CHECK(fs::exists(s.dir / "smith_alpha_1.5.svg"));
    for (double alpha : {0.0, 1.5}) {
        const auto t = read_table(s.dir / ("smith_alpha_" + format_number(alpha) + ".csv"));
        REQUIRE(t.rows.size() == 11 * 24);
        std::map<std::pair<long, long>, std::size_t> by_point;
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            const double mag = t.number(r, "gamma_mag");
            const Complex g(t.number(r, "gamma_re"), t.number(r, "gamma_im"));
            const double v = t.number(r, "v_ratio"), i = t.number(r, "i_ratio");
            if (mag == 0.0) {
                CHECK(v == 1.0);
                CHECK(i == 1.0);
                CHECK(t.number(r, "power_ratio") == 1.0);
            }
            CHECK(t.number(r, "power_ratio") == doctest::Approx(1.0 - std::norm(g)).epsilon(1e-10));
            CHECK(v == doctest::Approx(amplitude_ratio(g, alpha, Amplitude::voltage)).epsilon(1e-10));
            CHECK((t.number(r, "v_exceeds_one") != 0.0) == (v > 1.0));
            CHECK((t.number(r, "i_exceeds_one") != 0.0) == (i > 1.0));
            by_point[{std::lround(g.real() * 1e9), std::lround(g.imag() * 1e9)}] = r;
        }
        if (alpha != 0.0) continue;
        // Conjugate points carry the same ratios when the source is resistive.
        std::size_t pairs = 0;
        for (const auto& [key, r] : by_point) {
            const auto it = by_point.find({key.first, -key.second});
            if (it == by_point.end()) continue;
            ++pairs;
            CHECK(t.number(r, "v_ratio") == doctest::Approx(t.number(it->second, "v_ratio")).epsilon(1e-10));
            CHECK(t.number(r, "i_ratio") == doctest::Approx(t.number(it->second, "i_ratio")).epsilon(1e-10));
        }
        CHECK(pairs > 100);
    }
}

TEST_CASE("pareto command") {
    Scratch s;
    cmd_pareto(parse("[sweep]\nalpha = 0, 1, 2.5\npareto_points = 61\n"), s.dir);
    const auto t = read_table(s.dir / "pareto.csv");
    std::map<double, std::vector<ParetoPoint>> fronts;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        fronts[t.number(r, "alpha")].push_back(
            {t.number(r, "power_ratio"), t.number(r, "v_ratio"), t.number(r, "i_ratio")});
    }
    REQUIRE(fronts.size() == 3);
    for (const auto& [alpha, front] : fronts) {
        CHECK(front.front().power_ratio == 1.0);
        CHECK(front.front().v_ratio == 1.0);
        CHECK(front.front().i_ratio == 1.0);
        // Emitted points do not dominate each other.
        for (const auto& p : front) {
            for (const auto& q : front) {
                const bool dominates = q.power_ratio > p.power_ratio + 1e-9 && q.v_ratio < p.v_ratio - 1e-9 &&
                                       q.i_ratio < p.i_ratio - 1e-9;
                CHECK_FALSE(dominates);
            }
        }
    }
    SUBCASE("larger alpha costs less power at the same current ratio") {
        for (double target : {0.9, 0.8, 0.7, 0.6}) {
            double prev = -1.0;
            for (const auto& [alpha, front] : fronts) {
                // Best power among emitted points meeting the current target.
                double best = 0.0;
                for (const auto& p : front) {
                    if (p.i_ratio <= target + 1e-12) best = std::max(best, p.power_ratio);
                }
                const double exact = power_ratio(gamma_for_amplitude_target(target, alpha, Amplitude::current));
                CHECK(best <= exact + 1e-9);
                CHECK(exact >= prev);
                prev = exact;
            }
        }
    }
}

TEST_CASE("fsat command") {
    Scratch s;
    cmd_fsat(parse("[sweep]\ninv_i_script_min = 0\ninv_i_script_max = 1e4\ninv_i_script_points = 11\n"), s.dir);
    const auto t = read_table(s.dir / "fsat.csv");
    REQUIRE(t.rows.size() == 11);
    CHECK(t.header == std::vector<std::string>{"inv_i_script", "i_script", "f_sat_1", "f_sat_3", "f_sat_5", "f_sat_7"});
    CHECK(t.rows[0][1] == "inf");
    CHECK(t.number(0, "f_sat_1") == 1.0);
    for (std::size_t r = 1; r < t.rows.size(); ++r) {
        const double i = t.number(r, "i_script");
        CHECK(i == doctest::Approx(1.0 / t.number(r, "inv_i_script")).epsilon(1e-11));
        if (i >= 1.0) CHECK(t.number(r, "f_sat_1") == 1.0);
        for (int n : {1, 3, 5, 7}) {
            const double f = t.number(r, "f_sat_" + std::to_string(n));
            CHECK(std::abs(f - oracle::clipped_sine_harmonic(n, std::min(i, 1.0))) < 1e-9);
        }
    }
    const std::size_t last = t.rows.size() - 1;
    const double i = t.number(last, "i_script");
    for (int n : {1, 3, 5, 7}) {
        CHECK(std::abs(t.number(last, "f_sat_" + std::to_string(n))) / i ==
              doctest::Approx(4.0 / (n * pi)).epsilon(1e-6));
    }
}

TEST_CASE("saturate command") {
    Scratch s;
    cmd_saturate(parse(std::string(kLowPassPlant) + "[sweep]\ni_max_fractions = 1, 0.6, 1e-5\n"), s.dir);
    const auto t = read_table(s.dir / "saturate.csv");
    REQUIRE(t.rows.size() == 3);
    CHECK(t.number(0, "f_sat_1") == 1.0);
    CHECK(t.number(0, "p_ratio") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.number(2, "i1_over_i_max") == doctest::Approx(4.0 / pi).epsilon(1e-5));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double i1 = std::hypot(t.number(r, "i1_re"), t.number(r, "i1_im"));
        CHECK(i1 == doctest::Approx(t.number(r, "f_sat_1") * t.number(r, "i_temp_mag")).epsilon(1e-10));
        CHECK(t.number(r, "p_total") <= t.number(r, "p_fundamental") * (1 + 1e-12));
        CHECK(t.number(r, "i_script") == doctest::Approx(t.number(r, "i_max") / t.number(r, "i_temp_mag")).epsilon(1e-10));
        CHECK(t.number(r, "p_ratio") >= t.number(r, "linear_p_ratio") - 1e-12);
    }

    const auto h = read_table(s.dir / "saturate_harmonics.csv");
    CHECK(h.rows.size() == 3 * 5);
    std::map<double, double> power_sum;
    for (std::size_t r = 0; r < h.rows.size(); ++r) {
        power_sum[h.number(r, "i_max_fraction")] += h.number(r, "power");
        if (h.number(r, "n") > 1) CHECK(h.number(r, "power") <= 0.0);
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CHECK(power_sum.at(t.number(r, "i_max_fraction")) ==
              doctest::Approx(t.number(r, "p_total")).epsilon(1e-10));
    }
}

TEST_CASE("verify command") {
    SUBCASE("low-pass plant passes") {
        Scratch s;
        const auto report =
            cmd_verify(parse(std::string(kLowPassPlant) + kFastSim + "[sweep]\ni_max_fractions = 1.5, 0.6\n"), s.dir);
        CHECK(report.passed);
        const auto t = read_table(s.dir / "verify.csv");
        REQUIRE(t.rows.size() == 2);
        CHECK(t.rows[0].back() == "pass");
        CHECK(t.number(0, "power_error") < 0.005);
        CHECK(t.number(0, "position_error") < 0.005);
        CHECK(t.rows[1].back() == "pass");
        CHECK(t.number(1, "power_error") < 0.05);
    }
    SUBCASE("broadband plant is flagged, not failed") {
        Scratch s;
        const auto report =
            cmd_verify(parse(std::string(kBroadbandPlant) + kFastSim + "[sweep]\ni_max_fractions = 0.5\n"), s.dir);
        CHECK(report.passed);
        const auto t = read_table(s.dir / "verify.csv");
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0].back() == "flagged");
    }
}

TEST_CASE("repeat runs are byte-identical") {
    Scratch a, b;
    const auto cfg = parse(std::string(kLowPassPlant) + "[sweep]\ngamma_points = 7\nangle_points = 12\n"
                                                        "pareto_points = 21\ninv_i_script_points = 9\n[output]\nsvg = true\n");
    std::vector<fs::path> files;
    for (const auto& name : {"matched", "smith", "pareto", "fsat", "saturate"}) {
        for (const auto& f : run_command(name, cfg, a.dir).files) files.push_back(f.filename());
        run_command(name, cfg, b.dir);
    }
    CHECK(files.size() > 10);
    for (const auto& f : files) CHECK_MESSAGE(slurp(a.dir / f) == slurp(b.dir / f), f.string());
}

#ifdef WECSAT_CLI
TEST_CASE("command line exit codes") {
    Scratch s;
    const auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(s.dir / name) << text;
        return (s.dir / name).string();
    };
    const auto run = [&](const std::string& args) {
        const std::string cmd = std::string(WECSAT_CLI) + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    const std::string out = (s.dir / "out").string();
    const std::string good = write("good.cfg", "[sweep]\npareto_points = 11\n");
    CHECK(run("pareto --config " + good + " --out " + out) == 0);
    CHECK(fs::exists(s.dir / "out" / "pareto.csv"));

    CHECK(run("matched --config " + good + " --out " + out) == 1);
    CHECK(run("pareto --config " + write("bad.cfg", "[sweep]\nnope = 1\n") + " --out " + out) == 1);
    CHECK(run("pareto --config " + (s.dir / "missing.cfg").string()) == 1);
    CHECK(run("launch --config " + good) == 1);

    CHECK(run("saturate --config " + write("zero.cfg", std::string(kLowPassPlant) +
                                                       "[sweep]\ni_max_fractions = 0\n") + " --out " + out) == 1);

    // Above resonance alpha < 0, so the conjugate controller is inductive and
    // the closed loop is unstable.
    std::string above(kLowPassPlant);
    above.replace(above.find("m = 0.9"), 7, "m = 1.5");
    CHECK(run("verify --config " + write("above.cfg", above + "[sweep]\ni_max_fractions = 0.6\n") + " --out " + out) ==
          2);

    // Three periods cannot reach steady state, so the saturated row fails.
    const std::string coarse = write("coarse.cfg", std::string(kLowPassPlant) +
                                                       "[sim]\nsteps_per_period = 100\nn_periods = 3\n"
                                                       "transient_periods = 1\n[sweep]\ni_max_fractions = 0.6\n");
    CHECK(run("verify --config " + coarse + " --out " + out) == 3);
}
#endif
