#include "wecsat/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wecsat/errors.hpp"

namespace wecsat {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

struct Location {
    int line;
    std::string key;

    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << "config line " << line << " (" << key << "): " << what;
        throw ConfigError(msg.str());
    }
};

double to_double(const std::string& text, const Location& at) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        if (text == "inf" || text == "infinity") return INFINITY;
        at.fail("'" + text + "' is not a number");
    }
    return value;
}

long to_integer(const std::string& text, const Location& at) {
    long value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) at.fail("'" + text + "' is not an integer");
    return value;
}

std::size_t to_count(const std::string& text, const Location& at) {
    const long value = to_integer(text, at);
    if (value <= 0) at.fail("must be positive");
    return static_cast<std::size_t>(value);
}

bool to_bool(const std::string& text, const Location& at) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    at.fail("'" + text + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

template <typename T, typename Convert>
std::vector<T> to_list(const std::string& text, const Location& at, Convert convert) {
    std::vector<T> out;
    for (const auto& item : split_list(text)) out.push_back(convert(item, at));
    if (out.empty()) at.fail("empty list");
    return out;
}

using Setter = std::function<void(const std::string&, const Location&)>;

struct PlantBlock {
    WecPlant plant;
    double f_e_mag = 0.0;
    double f_e_phase = 0.0;
    std::optional<std::string> excitation;
    bool seen = false;
};

struct NondimBlock {
    NondimPlant value;
    bool seen = false;
};

}  // namespace

void RunConfig::validate() const {
    if (plant && nondim) throw ConfigError("config: give either [plant] or [nondim], not both");
    if (sweep.alpha.empty()) throw ConfigError("config: sweep.alpha is empty");
    if (sweep.i_max_fractions.empty()) throw ConfigError("config: sweep.i_max_fractions is empty");
    if (sweep.fsat_harmonics.empty()) throw ConfigError("config: sweep.fsat_harmonics is empty");
    if (sweep.gamma_points < 2) throw ConfigError("config: sweep.gamma_points must be at least 2");
    if (sweep.inv_i_script_points < 2) throw ConfigError("config: sweep.inv_i_script_points must be at least 2");
    if (!(sweep.inv_i_script_min >= 0.0) || !(sweep.inv_i_script_max > sweep.inv_i_script_min)) {
        throw ConfigError("config: need 0 <= inv_i_script_min < inv_i_script_max");
    }
    for (double f : sweep.i_max_fractions) {
        if (!(f > 0.0)) throw ConfigError("config: i_max_fractions must be positive");
    }
    for (int n : sweep.fsat_harmonics) {
        if (n < 1) throw ConfigError("config: fsat_harmonics must be positive");
    }
    if (sweep.n_harmonics < 1 || sweep.n_harmonics % 2 == 0) {
        throw ConfigError("config: sweep.n_harmonics must be odd and positive");
    }
    try {
        sim.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    PlantBlock pb;
    NondimBlock nb;
    WecPlant& p = pb.plant;
    NondimPlant& nd = nb.value;

    auto num = [](double& field) {
        return Setter([&field](const std::string& v, const Location& at) { field = to_double(v, at); });
    };
    auto count = [](std::size_t& field) {
        return Setter([&field](const std::string& v, const Location& at) { field = to_count(v, at); });
    };
    auto integer = [](int& field) {
        return Setter([&field](const std::string& v, const Location& at) {
            field = static_cast<int>(to_integer(v, at));
        });
    };

    std::map<std::string, std::map<std::string, Setter>> table;
    table["plant"] = {
        {"m", num(p.m)},
        {"a_added", num(p.a_added)},
        {"b_h", num(p.b_h)},
        {"k_h", num(p.k_h)},
        {"g_ratio", num(p.g_ratio)},
        {"b_d", num(p.b_d)},
        {"k_d", num(p.k_d)},
        {"k_t", num(p.k_t)},
        {"r_w", num(p.r_w)},
        {"l_w", num(p.l_w)},
        {"p_poles", integer(p.p_poles)},
        {"omega", num(p.omega)},
        {"j_density", num(p.j_density)},
        {"k_wavenumber", num(p.k_wavenumber)},
        {"g0", integer(p.g0)},
        {"f_e_mag", num(pb.f_e_mag)},
        {"f_e_phase", num(pb.f_e_phase)},
        {"excitation", [&pb](const std::string& v, const Location& at) {
             if (v != "haskind" && v != "raw") at.fail("excitation must be haskind or raw");
             pb.excitation = v;
         }},
    };
    table["nondim"] = {
        {"r_cal", num(nd.groups.r_cal)},
        {"d_cal", num(nd.groups.d_cal)},
        {"alpha_m", num(nd.groups.alpha_m)},
        {"l_cal", num(nd.groups.l_cal)},
        {"j_density", num(nd.j_density)},
        {"k_wavenumber", num(nd.k_wavenumber)},
        {"g0", integer(nd.g0)},
    };
    SweepConfig& s = cfg.sweep;
    table["sweep"] = {
        {"alpha", [&s](const std::string& v, const Location& at) { s.alpha = to_list<double>(v, at, to_double); }},
        {"gamma_points", count(s.gamma_points)},
        {"angle_points", count(s.angle_points)},
        {"pareto_points", count(s.pareto_points)},
        {"fsat_harmonics", [&s](const std::string& v, const Location& at) {
             s.fsat_harmonics = to_list<int>(v, at, [](const std::string& x, const Location& l) {
                 return static_cast<int>(to_integer(x, l));
             });
         }},
        {"inv_i_script_min", num(s.inv_i_script_min)},
        {"inv_i_script_max", num(s.inv_i_script_max)},
        {"inv_i_script_points", count(s.inv_i_script_points)},
        {"i_max_fractions",
         [&s](const std::string& v, const Location& at) { s.i_max_fractions = to_list<double>(v, at, to_double); }},
        {"n_harmonics", integer(s.n_harmonics)},
    };
    SimConfig& sim = cfg.sim;
    table["sim"] = {
        {"steps_per_period", integer(sim.steps_per_period)},
        {"n_periods", integer(sim.n_periods)},
        {"transient_periods", integer(sim.transient_periods)},
        {"convergence_tol", num(sim.convergence_tol)},
        {"algebraic_loop_tol", num(sim.algebraic_loop_tol)},
    };
    table["output"] = {
        {"directory", [&cfg](const std::string& v, const Location&) { cfg.output_directory = v; }},
        {"svg", [&cfg](const std::string& v, const Location& at) { cfg.svg = to_bool(v, at); }},
    };

    std::string section;
    std::map<std::string, int> seen_keys;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto comment = raw.find_first_of("#;");
        const std::string line = trim(std::string_view(raw).substr(0, comment));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') Location{line_no, line}.fail("unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!table.count(section)) Location{line_no, section}.fail("unknown section");
            if (section == "plant") pb.seen = true;
            if (section == "nondim") nb.seen = true;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) Location{line_no, line}.fail("expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const Location at{line_no, section + "." + key};
        if (section.empty()) at.fail("key outside of a section");
        auto& keys = table[section];
        auto it = keys.find(key);
        if (it == keys.end()) at.fail("unknown key");
        if (value.empty()) at.fail("missing value");
        if (seen_keys.count(at.key)) at.fail("duplicate key");
        seen_keys[at.key] = line_no;
        it->second(value, at);
    }

    if (pb.seen) {
        const bool climate = p.j_density > 0.0 && p.k_wavenumber > 0.0;
        const std::string mode = pb.excitation.value_or(climate ? "haskind" : "raw");
        try {
            if (mode == "haskind") {
                if (seen_keys.count("plant.f_e_mag")) {
                    throw ConfigError("config: f_e_mag conflicts with excitation = haskind");
                }
                p = with_haskind_excitation(p, pb.f_e_phase);
            } else {
                p.f_e = std::polar(pb.f_e_mag, pb.f_e_phase);
            }
            p.validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("config [plant]: ") + e.what());
        }
        cfg.plant = p;
    }
    if (nb.seen) {
        try {
            nd.groups.validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("config [nondim]: ") + e.what());
        }
        cfg.nondim = nd;
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

}  // namespace wecsat
