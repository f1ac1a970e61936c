#include "resetlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "resetlab/csv.hpp"
#include "resetlab/errors.hpp"
#include "resetlab/hosidf.hpp"

namespace resetlab {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"plant", {"num", "den"}},
        {"controller", {"omega_c_hz", "omega_d_hz", "omega_t_hz", "omega_i_hz", "kp", "kp_mode", "gamma", "alpha"}},
        {"shaping", {"enabled", "ratio"}},
        {"sweep",
         {"sequences", "hosidf_fmin_hz", "hosidf_fmax_hz", "hosidf_points", "points_per_decade", "sens_fmin_hz",
          "sens_fmax_hz", "sens_points"}},
        {"hosidf", {"parts", "orders", "include_plant"}},
        {"sim",
         {"fs", "settle_periods", "measure_periods", "noise_pct", "noise_model", "seed", "repetitions", "disturbance",
          "disturbance_fraction", "compare_freqs_hz", "compare_amplitudes", "compare_noise_pct"}},
        {"step", {"duration_s"}},
        {"output", {"dir", "plots"}},
    };
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream       in(t);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

double as_double(const std::string& key, const std::string& v) {
    try {
        return parse_double(trim(v));
    } catch (const ConfigError&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

long long as_integer(const std::string& key, const std::string& v) {
    const double d = as_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 9.0e15)
        throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    return static_cast<long long>(d);
}

bool as_bool(const std::string& key, const std::string& v) {
    const std::string t = trim(v);
    if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "off" || t == "no" || t == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<double> as_doubles(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (const auto& w : words(v)) out.push_back(as_double(key, w));
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::vector<int> as_ints(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& w : words(v)) out.push_back(static_cast<int>(as_integer(key, w)));
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

void check_positive(const char* name, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
}

}  // namespace

void RunConfig::validate() const {
    (void)plant();
    if (!plant().is_strictly_proper()) throw ConfigError("plant must be strictly proper");
    check_positive("omega_c_hz", omega_c_hz);
    check_positive("omega_d_hz", omega_d_hz);
    check_positive("omega_t_hz", omega_t_hz);
    check_positive("omega_i_hz", omega_i_hz);
    check_positive("shaping ratio", shaping_ratio);
    TuningParams t;
    t.omega_c = hz_to_rad(omega_c_hz);
    t.omega_d = hz_to_rad(omega_d_hz);
    t.omega_t = hz_to_rad(omega_t_hz);
    t.omega_i = hz_to_rad(omega_i_hz);
    t.kp      = kp;
    t.gamma   = gamma;
    t.alpha   = alpha;
    t.validate();
    if (sequences.empty()) throw ConfigError("at least one sequence is required");
    for (int id : sequences) (void)sequence_name(id);
    if (!(hosidf_fmin_hz > 0.0 && hosidf_fmax_hz > hosidf_fmin_hz)) throw ConfigError("hosidf grid needs 0 < fmin < fmax");
    if (!(sens_fmin_hz > 0.0 && sens_fmax_hz >= sens_fmin_hz)) throw ConfigError("sensitivity grid needs 0 < fmin <= fmax");
    if (hosidf_points < 0 || points_per_decade < 1) throw ConfigError("hosidf grid point counts must be positive");
    if (sens_points < 1) throw ConfigError("sens_points must be >= 1");
    validate_orders(orders);
    if (orders.empty()) throw ConfigError("at least one harmonic order is required");
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (!(noise_pct >= 0.0)) throw ConfigError("noise_pct must be >= 0");
    if (!(disturbance_fraction > 0.0)) throw ConfigError("disturbance_fraction must be positive");
    if (compare_freqs_hz.size() != compare_amplitudes.size() || compare_freqs_hz.size() != compare_noise_pct.size())
        throw ConfigError("compare_freqs_hz, compare_amplitudes and compare_noise_pct must have equal lengths");
    for (double f : compare_freqs_hz) check_positive("compare frequency", f);
    for (double a : compare_amplitudes) check_positive("compare amplitude", a);
    for (double n : compare_noise_pct)
        if (!(n >= 0.0)) throw ConfigError("compare noise must be >= 0");
    check_positive("step duration", step_duration_s);
    if (out_dir.empty()) throw ConfigError("output directory must not be empty");
    sim_config().validate();
}

RationalTF RunConfig::plant() const { return RationalTF(plant_num, plant_den); }

TuningParams RunConfig::tuning() const {
    TuningParams t;
    t.omega_c = hz_to_rad(omega_c_hz);
    t.omega_d = hz_to_rad(omega_d_hz);
    t.omega_t = hz_to_rad(omega_t_hz);
    t.omega_i = hz_to_rad(omega_i_hz);
    t.kp      = kp;
    t.gamma   = gamma;
    t.alpha   = alpha;
    t.validate();
    if (kp_mode == KpMode::crossover) t.kp = tune_kp_for_crossover(t, plant());
    return t;
}

std::optional<ShapingFilter> RunConfig::shaping_filter() const {
    const double wc = hz_to_rad(omega_c_hz);
    return design_shaping_filter(wc, shaping_ratio * wc);
}

SimConfig RunConfig::sim_config() const {
    SimConfig c;
    c.fs              = fs;
    c.settle_periods  = settle_periods;
    c.measure_periods = measure_periods;
    c.noise_fraction  = noise_pct / 100.0;
    c.noise_model     = noise_model;
    c.seed            = seed;
    c.shaping         = shaping;
    c.duration_s      = 0.0;
    return c;
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }

    RunConfig   c;
    const auto& known = known_keys();
    for (const auto& [section, body] : tree) {
        const auto it = known.find(section);
        if (it == known.end()) throw ConfigError("unknown config section [" + section + "]");
        if (body.empty() && !body.data().empty()) throw ConfigError("config key '" + section + "' outside a section");
        for (const auto& [key, node] : body) {
            if (!it->second.count(key)) throw ConfigError("unknown config key '" + key + "' in [" + section + "]");
            const std::string v    = trim(node.data());
            const std::string full = section + "." + key;
            if (section == "plant") {
                (key == "num" ? c.plant_num : c.plant_den) = as_doubles(full, v);
            } else if (section == "controller") {
                if (key == "omega_c_hz") c.omega_c_hz = as_double(full, v);
                else if (key == "omega_d_hz") c.omega_d_hz = as_double(full, v);
                else if (key == "omega_t_hz") c.omega_t_hz = as_double(full, v);
                else if (key == "omega_i_hz") c.omega_i_hz = as_double(full, v);
                else if (key == "kp") c.kp = as_double(full, v);
                else if (key == "gamma") c.gamma = as_double(full, v);
                else if (key == "alpha") c.alpha = as_double(full, v);
                else if (key == "kp_mode") {
                    if (v == "crossover") c.kp_mode = KpMode::crossover;
                    else if (v == "table") c.kp_mode = KpMode::table;
                    else throw ConfigError("controller.kp_mode must be crossover or table, got '" + v + "'");
                }
            } else if (section == "shaping") {
                if (key == "enabled") c.shaping = as_bool(full, v);
                else c.shaping_ratio = as_double(full, v);
            } else if (section == "sweep") {
                if (key == "sequences") c.sequences = as_ints(full, v);
                else if (key == "hosidf_fmin_hz") c.hosidf_fmin_hz = as_double(full, v);
                else if (key == "hosidf_fmax_hz") c.hosidf_fmax_hz = as_double(full, v);
                else if (key == "hosidf_points") c.hosidf_points = static_cast<int>(as_integer(full, v));
                else if (key == "points_per_decade") c.points_per_decade = static_cast<int>(as_integer(full, v));
                else if (key == "sens_fmin_hz") c.sens_fmin_hz = as_double(full, v);
                else if (key == "sens_fmax_hz") c.sens_fmax_hz = as_double(full, v);
                else if (key == "sens_points") c.sens_points = static_cast<int>(as_integer(full, v));
            } else if (section == "hosidf") {
                if (key == "orders") c.orders = as_ints(full, v);
                else if (key == "include_plant") c.include_plant = as_bool(full, v);
                else if (key == "parts") {
                    if (v == "fig2") c.hosidf_parts = HosidfParts::fig2;
                    else if (v == "pi_cglp") c.hosidf_parts = HosidfParts::pi_cglp;
                    else throw ConfigError("hosidf.parts must be fig2 or pi_cglp, got '" + v + "'");
                }
            } else if (section == "sim") {
                if (key == "fs") c.fs = as_double(full, v);
                else if (key == "settle_periods") c.settle_periods = static_cast<int>(as_integer(full, v));
                else if (key == "measure_periods") c.measure_periods = static_cast<int>(as_integer(full, v));
                else if (key == "noise_pct") c.noise_pct = as_double(full, v);
                else if (key == "seed") {
                    const long long s = as_integer(full, v);
                    if (s < 0) throw ConfigError("sim.seed must be >= 0");
                    c.seed = static_cast<std::uint64_t>(s);
                } else if (key == "repetitions") c.repetitions = static_cast<int>(as_integer(full, v));
                else if (key == "disturbance") c.disturbance = as_bool(full, v);
                else if (key == "disturbance_fraction") c.disturbance_fraction = as_double(full, v);
                else if (key == "compare_freqs_hz") c.compare_freqs_hz = as_doubles(full, v);
                else if (key == "compare_amplitudes") c.compare_amplitudes = as_doubles(full, v);
                else if (key == "compare_noise_pct") c.compare_noise_pct = as_doubles(full, v);
                else if (key == "noise_model") {
                    if (v == "uniform") c.noise_model = NoiseModel::uniform;
                    else if (v == "gaussian") c.noise_model = NoiseModel::gaussian;
                    else throw ConfigError("sim.noise_model must be uniform or gaussian, got '" + v + "'");
                }
            } else if (section == "step") {
                c.step_duration_s = as_double(full, v);
            } else if (section == "output") {
                if (key == "dir") c.out_dir = v;
                else c.plots = as_bool(full, v);
            }
        }
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_overrides(RunConfig& cfg, const ConfigOverrides& ov, GridTarget grid) {
    if (ov.sequences) cfg.sequences = *ov.sequences;
    if (ov.noise_pct) {
        cfg.noise_pct = *ov.noise_pct;
        std::fill(cfg.compare_noise_pct.begin(), cfg.compare_noise_pct.end(), *ov.noise_pct);
    }
    if (ov.seed) cfg.seed = *ov.seed;
    if (ov.shaping) cfg.shaping = *ov.shaping;
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (grid == GridTarget::hosidf) {
        if (ov.fmin_hz) cfg.hosidf_fmin_hz = *ov.fmin_hz;
        if (ov.fmax_hz) cfg.hosidf_fmax_hz = *ov.fmax_hz;
        if (ov.points) cfg.hosidf_points = *ov.points;
    } else {
        if (ov.fmin_hz) cfg.sens_fmin_hz = *ov.fmin_hz;
        if (ov.fmax_hz) cfg.sens_fmax_hz = *ov.fmax_hz;
        if (ov.points) cfg.sens_points = *ov.points;
    }
    cfg.validate();
}

}  // namespace resetlab
