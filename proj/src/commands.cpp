#include "wecsat/commands.hpp"

#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>

#include "wecsat/csv.hpp"
#include "wecsat/describing_function.hpp"
#include "wecsat/errors.hpp"
#include "wecsat/svg.hpp"
#include "wecsat/time_domain.hpp"

namespace wecsat {
namespace fs = std::filesystem;
namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name, CommandReport& report) {
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    report.files.push_back(path);
    return out;
}

const WecPlant& require_plant(const RunConfig& cfg, const char* command) {
    if (!cfg.plant) throw ConfigError(std::string(command) + " needs a [plant] block");
    return *cfg.plant;
}

void quantity(std::ostream& out, std::string_view name, double value) {
    CsvRow row;
    row << name << value;
    write_csv_row(out, row);
}

}  // namespace

CommandReport cmd_matched(const RunConfig& cfg, const fs::path& dir) {
    if (!cfg.plant && !cfg.nondim) throw ConfigError("matched needs a [plant] or [nondim] block");
    CommandReport report;
    auto out = open_output(dir, "matched.csv", report);
    write_csv_header(out, {"quantity", "value"});

    NondimGroups groups;
    double j = 0.0, k = 0.0;
    int g0 = 1;
    if (cfg.plant) {
        const WecPlant& plant = *cfg.plant;
        const TheveninSource src = thevenin_from_plant(plant);
        const MatchedBaseline base = matched_baseline(src);
        quantity(out, "v_th_re", src.v_th.real());
        quantity(out, "v_th_im", src.v_th.imag());
        quantity(out, "z_th_re", src.z_th.real());
        quantity(out, "z_th_im", src.z_th.imag());
        quantity(out, "alpha", src.alpha());
        quantity(out, "p_matched", base.p_matched);
        quantity(out, "v_peak_matched", base.v_peak_matched);
        quantity(out, "i_peak_matched", base.i_peak_matched);
        groups = nondim_from_plant(plant);
        j = plant.j_density;
        k = plant.k_wavenumber;
        g0 = plant.g0;
    } else {
        groups = cfg.nondim->groups;
        j = cfg.nondim->j_density;
        k = cfg.nondim->k_wavenumber;
        g0 = cfg.nondim->g0;
    }

    quantity(out, "r_cal", groups.r_cal);
    quantity(out, "d_cal", groups.d_cal);
    quantity(out, "alpha_m", groups.alpha_m);
    quantity(out, "l_cal", groups.l_cal);
    quantity(out, "alpha_nondim", alpha_from_nondim(groups));
    if (j > 0.0 && k > 0.0) quantity(out, "p_matched_nondim", matched_power(groups, j, k, g0));
    if (groups.l_cal == 0.0 && groups.r_cal > 0.0) {
        const auto [plus, minus] = optimal_alpha_m_for_limits(groups);
        quantity(out, "alpha_m_opt_plus", plus);
        quantity(out, "alpha_m_opt_minus", minus);
    }
    report.summary = "matched baseline written";
    return report;
}

CommandReport cmd_smith(const RunConfig& cfg, const fs::path& dir) {
    CommandReport report;
    for (double alpha : cfg.sweep.alpha) {
        const SmithGrid grid = smith_grid(alpha, cfg.sweep.gamma_points, cfg.sweep.angle_points);
        const std::string stem = "smith_alpha_" + format_number(alpha);
        auto out = open_output(dir, stem + ".csv", report);
        write_csv_header(out, {"gamma_mag", "gamma_angle", "gamma_re", "gamma_im", "power_ratio", "v_ratio", "i_ratio",
                               "v_exceeds_one", "i_exceeds_one"});
        for (const SmithCell& c : grid.cells) {
            CsvRow row;
            row << std::abs(c.gamma) << std::arg(c.gamma) << c.gamma.real() << c.gamma.imag() << c.power_ratio
                << c.v_ratio << c.i_ratio << c.v_exceeds_one << c.i_exceeds_one;
            write_csv_row(out, row);
        }
        if (cfg.svg) {
            auto svg = open_output(dir, stem + ".svg", report);
            write_smith_svg(svg, grid);
        }
    }
    report.summary = std::to_string(cfg.sweep.alpha.size()) + " Smith grids written";
    return report;
}

CommandReport cmd_pareto(const RunConfig& cfg, const fs::path& dir) {
    CommandReport report;
    std::map<double, std::vector<ParetoPoint>> fronts;
    auto out = open_output(dir, "pareto.csv", report);
    write_csv_header(out, {"alpha", "power_ratio", "v_ratio", "i_ratio"});
    for (double alpha : cfg.sweep.alpha) {
        const auto front = pareto_front(alpha, cfg.sweep.pareto_points);
        for (const ParetoPoint& p : front) {
            CsvRow row;
            row << alpha << p.power_ratio << p.v_ratio << p.i_ratio;
            write_csv_row(out, row);
        }
        fronts[alpha] = front;
    }
    if (cfg.svg) {
        auto svg = open_output(dir, "pareto.svg", report);
        write_pareto_svg(svg, fronts);
    }
    report.summary = std::to_string(fronts.size()) + " Pareto fronts written";
    return report;
}

CommandReport cmd_fsat(const RunConfig& cfg, const fs::path& dir) {
    CommandReport report;
    const SweepConfig& s = cfg.sweep;
    std::vector<double> inv(s.inv_i_script_points);
    std::map<int, std::vector<double>> curves;

    std::vector<std::string> header{"inv_i_script", "i_script"};
    for (int n : s.fsat_harmonics) header.push_back("f_sat_" + std::to_string(n));
    auto out = open_output(dir, "fsat.csv", report);
    write_csv_header(out, header);
    for (std::size_t k = 0; k < inv.size(); ++k) {
        inv[k] = s.inv_i_script_min +
                 (s.inv_i_script_max - s.inv_i_script_min) * static_cast<double>(k) / static_cast<double>(inv.size() - 1);
        const double i_script = inv[k] == 0.0 ? INFINITY : 1.0 / inv[k];
        CsvRow row;
        row << inv[k] << i_script;
        for (int n : s.fsat_harmonics) {
            const double f = saturation_factor(n, i_script);
            curves[n].push_back(f);
            row << f;
        }
        write_csv_row(out, row);
    }
    if (cfg.svg) {
        auto svg = open_output(dir, "fsat.svg", report);
        write_fsat_svg(svg, inv, curves);
    }
    report.summary = "saturation factors written";
    return report;
}

CommandReport cmd_saturate(const RunConfig& cfg, const fs::path& dir) {
    const WecPlant& plant = require_plant(cfg, "saturate");
    const TheveninSource src = thevenin_from_plant(plant);
    const MatchedBaseline base = matched_baseline(src);
    SaturationOptions opts;
    opts.n_harmonics = cfg.sweep.n_harmonics;

    CommandReport report;
    auto out = open_output(dir, "saturate.csv", report);
    auto harm = open_output(dir, "saturate_harmonics.csv", report);
    write_csv_header(out, {"i_max_fraction", "i_max", "i_script", "f_sat_1", "i_temp_mag", "psi", "i1_re", "i1_im",
                           "i1_over_i_max", "p_total", "p_fundamental", "p_ratio", "linear_p_ratio", "iterations"});
    write_csv_header(harm, {"i_max_fraction", "n", "current_re", "current_im", "load_voltage_re", "load_voltage_im",
                            "power"});

    for (double fraction : cfg.sweep.i_max_fractions) {
        const double i_max = fraction * base.i_peak_matched;
        const SaturationSolution sol = solve_operating_point(plant, i_max, opts);
        const Complex i1 = sol.fundamental().current;
        const double linear = fraction >= 1.0 ? 1.0 : linear_saturation_equivalent(src, i_max).load_power_ratio;
        CsvRow row;
        row << fraction << i_max << sol.i_script << sol.f_sat1 << std::abs(sol.i_temp) << sol.psi << i1.real()
            << i1.imag() << std::abs(i1) / i_max << sol.p_total << classic_sidf_power(sol)
            << sol.p_total / base.p_matched << linear << sol.iterations;
        write_csv_row(out, row);
        for (const HarmonicTerm& h : sol.harmonics) {
            CsvRow hr;
            hr << fraction << h.n << h.current.real() << h.current.imag() << h.load_voltage.real()
               << h.load_voltage.imag() << h.power;
            write_csv_row(harm, hr);
        }
    }
    report.summary = std::to_string(cfg.sweep.i_max_fractions.size()) + " saturated operating points written";
    return report;
}

CommandReport cmd_verify(const RunConfig& cfg, const fs::path& dir) {
    const WecPlant& plant = require_plant(cfg, "verify");
    const MatchedBaseline base = matched_baseline(thevenin_from_plant(plant));
    SaturationOptions opts;
    opts.n_harmonics = cfg.sweep.n_harmonics;
    SimConfig sim = cfg.sim;
    sim.n_harmonics = cfg.sweep.n_harmonics;

    std::vector<std::future<ValidationReport>> jobs;
    for (double fraction : cfg.sweep.i_max_fractions) {
        const double i_max = fraction * base.i_peak_matched;
        jobs.push_back(std::async(std::launch::async, [&plant, i_max, sim, opts] {
            return validate_df(plant, i_max, sim, opts);
        }));
    }
    std::vector<ValidationReport> rows;
    for (auto& job : jobs) rows.push_back(job.get());

    CommandReport report;
    auto out = open_output(dir, "verify.csv", report);
    write_csv_header(out, {"i_max_fraction", "i_max", "saturated", "figure_of_merit", "low_pass",
                           "assumption_violated", "sim_converged", "p_df", "p_sim", "power_error", "i1_df", "i1_sim",
                           "current_error", "x_df", "x_sim", "position_error", "status"});
    int failed = 0, flagged = 0;
    for (const ValidationReport& r : rows) {
        std::string status = r.passed ? "pass" : "fail";
        if (r.assumption_violated) {
            status = "flagged";
            ++flagged;
        } else if (!r.passed) {
            ++failed;
        }
        CsvRow row;
        row << r.i_max_fraction << r.i_max << r.saturated << r.figure_of_merit << r.low_pass << r.assumption_violated
            << r.sim_converged << r.p_df << r.p_sim << r.power_error << r.i1_df << r.i1_sim << r.current_error
            << r.x_df << r.x_sim << r.position_error << status;
        write_csv_row(out, row);
    }
    report.passed = failed == 0;
    std::ostringstream msg;
    msg << rows.size() << " rows verified, " << failed << " failed, " << flagged << " flagged";
    report.summary = msg.str();
    return report;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"matched", "smith", "pareto", "fsat", "saturate", "verify"};
    return names;
}

CommandReport run_command(const std::string& name, const RunConfig& cfg, const fs::path& dir) {
    if (name == "matched") return cmd_matched(cfg, dir);
    if (name == "smith") return cmd_smith(cfg, dir);
    if (name == "pareto") return cmd_pareto(cfg, dir);
    if (name == "fsat") return cmd_fsat(cfg, dir);
    if (name == "saturate") return cmd_saturate(cfg, dir);
    if (name == "verify") return cmd_verify(cfg, dir);
    throw ConfigError("unknown command '" + name + "'");
}

int run_cli(const std::string& name, const std::string& config_path, const std::string& out_dir, bool svg,
            std::ostream& log) {
    try {
        RunConfig cfg = load_config(config_path);
        if (svg) cfg.svg = true;
        std::string dir = out_dir;
        if (dir.empty()) dir = cfg.output_directory.empty() ? "out" : cfg.output_directory;
        const CommandReport report = run_command(name, cfg, dir);
        log << name << ": " << report.summary << '\n';
        for (const auto& f : report.files) log << "  " << f.string() << '\n';
        return report.passed ? exit_ok : exit_verification;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const ConvergenceError& e) {
        log << "numerical error: " << e.what() << " (" << e.residuals().size() << " residuals)\n";
        return exit_numerical;
    } catch (const DivergenceError& e) {
        log << "numerical error: " << e.what() << '\n';
        for (const auto& line : e.trace()) log << "  " << line << '\n';
        return exit_numerical;
    } catch (const Error& e) {
        log << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const fs::filesystem_error& e) {
        log << "output error: " << e.what() << '\n';
        return exit_numerical;
    }
}

}  // namespace wecsat
