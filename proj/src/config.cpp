#include "spinbeats/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace spinbeats {

std::string method_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::Kraus: return "kraus";
        case MethodKind::Inherent: return "inherent";
        case MethodKind::InherentCorrection: return "inherent+correction";
    }
    return "?";
}

MethodKind method_from_name(const std::string& name) {
    if (name == "kraus") return MethodKind::Kraus;
    if (name == "inherent") return MethodKind::Inherent;
    if (name == "inherent+correction") return MethodKind::InherentCorrection;
    throw ConfigError("unknown method '" + name + "' (expected kraus, inherent or inherent+correction)");
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& value, const std::string& key) {
    const std::string v = trim(value);
    if (v == "inf") return std::numeric_limits<double>::infinity();
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    if (v == "nan") return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
    const std::string v = trim(value);
    try {
        std::size_t used = 0;
        const unsigned long long d = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer from '" + v + "'");
    }
}

std::vector<HyperfineCoupling> parse_hfc(const std::string& value) {
    // comma-separated electron:spin:a_mT triples, e.g. "1:1:1.8, 1:0.5:-1.87"
    std::vector<HyperfineCoupling> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        HyperfineCoupling h;
        const auto c1 = item.find(':');
        const auto c2 = item.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ConfigError("hfc entry '" + item + "' is not electron:spin:a_mT");
        h.electron = static_cast<int>(parse_double(item.substr(0, c1), "hfc"));
        h.nuclear_spin = parse_double(item.substr(c1 + 1, c2 - c1 - 1), "hfc");
        h.a_mT = parse_double(item.substr(c2 + 1), "hfc");
        out.push_back(h);
    }
    return out;
}

std::string hfc_to_string(const std::vector<HyperfineCoupling>& hfc) {
    std::string out;
    for (std::size_t i = 0; i < hfc.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(hfc[i].electron) + ":" + format_double(hfc[i].nuclear_spin) + ":" +
               format_double(hfc[i].a_mT);
    }
    return out;
}

using Section = std::map<std::string, std::string>;
using Sections = std::map<std::string, Section>;

Sections tokenize(const std::string& text) {
    Sections out;
    std::string section = "system";
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            out[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        if (!out[section].insert({key, value}).second)
            throw ConfigError("duplicate key '" + key + "' in [" + section + "]");
    }
    return out;
}

void apply_system_keys(SpinSystemSpec& spec, const Section& sec, std::set<std::string>& known) {
    for (const auto& [key, value] : sec) {
        if (key == "g1") spec.g1 = parse_double(value, key);
        else if (key == "g2") spec.g2 = parse_double(value, key);
        else if (key == "B_mT") spec.field_mT = parse_double(value, key);
        else if (key == "T1_ns") spec.t1_ns = parse_double(value, key);
        else if (key == "T2_ns") spec.t2_ns = parse_double(value, key);
        else if (key == "sigma_rad_per_ns") spec.sigma_rad_per_ns = parse_double(value, key);
        else if (key == "hfc") spec.hfc = parse_hfc(value);
        else if (!known.count(key))
            throw ConfigError("unknown key '" + key + "' in a system section");
    }
}

}  // namespace

void RunConfig::validate() const {
    grid.validate();
    method.qubit.validate();
    if (method.n_echo < 2 || method.n_echo % 2 != 0)
        throw ConfigError("method.n_echo must be even and >= 2");
    if (std::isnan(sys.theta) || sys.theta < 0.0 || sys.theta > 1.0)
        throw ConfigError("system theta must lie in [0,1]");
    auto check_spec = [&](const SpinSystemSpec& s, const char* which) {
        if (std::isnan(s.t1_ns) || std::isnan(s.t2_ns))
            throw ConfigError(std::string("the '") + preset_name + "' preset does not fix T1/T2 for the " +
                              which + " field; set T1_ns and T2_ns explicitly");
        try {
            s.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string(which) + " system: " + e.what());
        }
    };
    check_spec(sys.low, "low");
    check_spec(sys.high, "high");
    if (method.kind == MethodKind::InherentCorrection) {
        if (!std::isfinite(method.target_t2_ns))
            throw ConfigError("inherent+correction needs a finite target_T2_ns");
    }
    if (noise_study.sigma < 0.0) throw ConfigError("noise_study.sigma must be >= 0");
    if (noise_study.trials < 1) throw ConfigError("noise_study.trials must be >= 1");
}

RunConfig parse_config_text(const std::string& text) {
    const Sections sections = tokenize(text);
    for (const auto& [name, _] : sections)
        if (name != "system" && name != "low" && name != "high" && name != "method" &&
            name != "grid" && name != "noise_study" && name != "output")
            throw ConfigError("unknown section [" + name + "]");

    RunConfig cfg;
    const Section empty;
    auto section = [&](const char* name) -> const Section& {
        const auto it = sections.find(name);
        return it == sections.end() ? empty : it->second;
    };

    // system block: preset plus overrides shared by both fields
    const Section& sys_sec = section("system");
    if (const auto it = sys_sec.find("preset"); it != sys_sec.end()) cfg.preset_name = trim(it->second);
    cfg.sys = preset(cfg.preset_name);
    // [system] keys override both field variants; [low]/[high] refine each
    std::set<std::string> known{"preset", "theta", "detector_sigma"};
    apply_system_keys(cfg.sys.low, sys_sec, known);
    apply_system_keys(cfg.sys.high, sys_sec, known);
    if (const auto it = sys_sec.find("theta"); it != sys_sec.end())
        cfg.sys.theta = parse_double(it->second, "theta");
    if (const auto it = sys_sec.find("detector_sigma"); it != sys_sec.end())
        cfg.sys.detector_sigma = parse_double(it->second, "detector_sigma");
    cfg.sys.low.theta = cfg.sys.theta;
    cfg.sys.high.theta = cfg.sys.theta;

    std::set<std::string> none;
    apply_system_keys(cfg.sys.low, section("low"), none);
    apply_system_keys(cfg.sys.high, section("high"), none);

    for (const auto& [key, value] : section("method")) {
        if (key == "name") cfg.method.kind = method_from_name(trim(value));
        else if (key == "shots") cfg.method.shots = parse_u64(value, key);
        else if (key == "n_echo") cfg.method.n_echo = static_cast<int>(parse_u64(value, key));
        else if (key == "qubit_T1_ns") cfg.method.qubit.t1_ns = parse_double(value, key);
        else if (key == "qubit_T2_ns") cfg.method.qubit.t2_ns = parse_double(value, key);
        else if (key == "t_id_ns") cfg.method.qubit.t_id_ns = parse_double(value, key);
        else if (key == "drift_rad_per_ns") cfg.method.qubit.drift_rad_per_ns = parse_double(value, key);
        else if (key == "per_shot_random_rz") cfg.method.qubit.per_shot_random_rz = (trim(value) == "true");
        else if (key == "target_T1_ns") cfg.method.target_t1_ns = parse_double(value, key);
        else if (key == "target_T2_ns") cfg.method.target_t2_ns = parse_double(value, key);
        else throw ConfigError("unknown key '" + key + "' in [method]");
    }

    cfg.grid = cfg.sys.grid;
    for (const auto& [key, value] : section("grid")) {
        if (key == "start_ns") cfg.grid.start_ns = parse_double(value, key);
        else if (key == "stop_ns") cfg.grid.stop_ns = parse_double(value, key);
        else if (key == "points") cfg.grid.points = static_cast<int>(parse_u64(value, key));
        else throw ConfigError("unknown key '" + key + "' in [grid]");
    }

    cfg.noise_study.sigma = cfg.sys.detector_sigma;
    for (const auto& [key, value] : section("noise_study")) {
        if (key == "sigma") cfg.noise_study.sigma = parse_double(value, key);
        else if (key == "mu") cfg.noise_study.mu = parse_double(value, key);
        else if (key == "trials") cfg.noise_study.trials = static_cast<int>(parse_u64(value, key));
        else throw ConfigError("unknown key '" + key + "' in [noise_study]");
    }

    for (const auto& [key, value] : section("output")) {
        if (key == "csv") cfg.out_csv = trim(value);
        else if (key == "svg") cfg.out_svg = trim(value);
        else if (key == "seed") cfg.seed = parse_u64(value, key);
        else throw ConfigError("unknown key '" + key + "' in [output]");
    }

    // defaults for the correction targets: the system's own relaxation
    if (std::isnan(cfg.method.target_t1_ns)) cfg.method.target_t1_ns = cfg.sys.high.t1_ns;
    if (std::isnan(cfg.method.target_t2_ns)) cfg.method.target_t2_ns = cfg.sys.high.t2_ns;
    cfg.noise_study.seed = cfg.seed;
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    auto spec_block = [&](const SpinSystemSpec& s) {
        os << "g1 = " << format_double(s.g1) << '\n';
        os << "g2 = " << format_double(s.g2) << '\n';
        os << "B_mT = " << format_double(s.field_mT) << '\n';
        os << "T1_ns = " << format_double(s.t1_ns) << '\n';
        os << "T2_ns = " << format_double(s.t2_ns) << '\n';
        os << "sigma_rad_per_ns = " << format_double(s.sigma_rad_per_ns) << '\n';
        if (!s.hfc.empty()) os << "hfc = " << hfc_to_string(s.hfc) << '\n';
    };
    os << "[system]\n";
    os << "preset = " << cfg.preset_name << '\n';
    os << "theta = " << format_double(cfg.sys.theta) << '\n';
    os << "detector_sigma = " << format_double(cfg.sys.detector_sigma) << '\n';
    os << "[low]\n";
    spec_block(cfg.sys.low);
    os << "[high]\n";
    spec_block(cfg.sys.high);
    os << "[method]\n";
    os << "name = " << method_name(cfg.method.kind) << '\n';
    os << "shots = " << cfg.method.shots << '\n';
    os << "n_echo = " << cfg.method.n_echo << '\n';
    os << "qubit_T1_ns = " << format_double(cfg.method.qubit.t1_ns) << '\n';
    os << "qubit_T2_ns = " << format_double(cfg.method.qubit.t2_ns) << '\n';
    os << "t_id_ns = " << format_double(cfg.method.qubit.t_id_ns) << '\n';
    os << "drift_rad_per_ns = " << format_double(cfg.method.qubit.drift_rad_per_ns) << '\n';
    os << "per_shot_random_rz = " << (cfg.method.qubit.per_shot_random_rz ? "true" : "false") << '\n';
    os << "target_T1_ns = " << format_double(cfg.method.target_t1_ns) << '\n';
    os << "target_T2_ns = " << format_double(cfg.method.target_t2_ns) << '\n';
    os << "[grid]\n";
    os << "start_ns = " << format_double(cfg.grid.start_ns) << '\n';
    os << "stop_ns = " << format_double(cfg.grid.stop_ns) << '\n';
    os << "points = " << cfg.grid.points << '\n';
    os << "[noise_study]\n";
    os << "sigma = " << format_double(cfg.noise_study.sigma) << '\n';
    os << "mu = " << format_double(cfg.noise_study.mu) << '\n';
    os << "trials = " << cfg.noise_study.trials << '\n';
    os << "[output]\n";
    if (!cfg.out_csv.empty()) os << "csv = " << cfg.out_csv << '\n';
    if (!cfg.out_svg.empty()) os << "svg = " << cfg.out_svg << '\n';
    os << "seed = " << cfg.seed << '\n';
    return os.str();
}

}  // namespace spinbeats
