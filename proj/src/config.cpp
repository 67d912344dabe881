#include "polariton/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polariton/errors.hpp"

namespace polariton {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (...) {
        throw ConfigError("key '" + key + "': cannot parse number from '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    return x;
}

long to_long(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long x = 0;
    try {
        x = std::stol(v, &pos);
    } catch (...) {
        throw ConfigError("key '" + key + "': cannot parse integer from '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError("key '" + key + "': trailing characters in '" + v + "'");
    return x;
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("key '" + key + "': empty list element");
        out.push_back(to_double(key, item));
    }
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

std::vector<std::string> to_string_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, std::map<std::string, Setter>> schema = {
        {"medium",
         {
             {"shape", [&](const std::string&, const std::string& v) { cfg.shape = v; }},
             {"lx", [&](const std::string& k, const std::string& v) { cfg.lx = to_double(k, v); }},
             {"ly", [&](const std::string& k, const std::string& v) { cfg.ly = to_double(k, v); }},
             {"lz", [&](const std::string& k, const std::string& v) { cfg.lz = to_double(k, v); }},
             {"radius",
              [&](const std::string& k, const std::string& v) { cfg.radius = to_double(k, v); }},
             {"thickness",
              [&](const std::string& k, const std::string& v) { cfg.thickness = to_double(k, v); }},
             {"h", [&](const std::string& k, const std::string& v) { cfg.h = to_double(k, v); }},
             {"dielectric",
              [&](const std::string&, const std::string& v) { cfg.dielectric = v; }},
             {"eps_i",
              [&](const std::string& k, const std::string& v) { cfg.eps_i = to_double(k, v); }},
             {"band_lo",
              [&](const std::string& k, const std::string& v) { cfg.band_lo = to_double(k, v); }},
             {"band_hi",
              [&](const std::string& k, const std::string& v) { cfg.band_hi = to_double(k, v); }},
             {"plasma_freq",
              [&](const std::string& k, const std::string& v) { cfg.plasma_freq = to_list(k, v); }},
             {"damping",
              [&](const std::string& k, const std::string& v) { cfg.damping = to_list(k, v); }},
             {"resonance",
              [&](const std::string& k, const std::string& v) { cfg.resonance = to_list(k, v); }},
             {"nu_table",
              [&](const std::string& k, const std::string& v) { cfg.nu_table = to_list(k, v); }},
             {"eps_table",
              [&](const std::string& k, const std::string& v) { cfg.eps_table = to_list(k, v); }},
             {"coupling_scale",
              [&](const std::string& k, const std::string& v) {
                  cfg.coupling_scale = to_double(k, v);
              }},
             {"strict_positivity",
              [&](const std::string& k, const std::string& v) {
                  cfg.strict_positivity = to_bool(k, v);
              }},
             {"units", [&](const std::string&, const std::string& v) { cfg.units = v; }},
         }},
        {"grid",
         {
             {"n_k",
              [&](const std::string& k, const std::string& v) {
                  cfg.grid.n_k = static_cast<int>(to_long(k, v));
              }},
             {"n_theta",
              [&](const std::string& k, const std::string& v) {
                  cfg.grid.n_theta = static_cast<int>(to_long(k, v));
              }},
             {"n_eta",
              [&](const std::string& k, const std::string& v) {
                  cfg.grid.n_eta = static_cast<int>(to_long(k, v));
              }},
             {"n_nu",
              [&](const std::string& k, const std::string& v) {
                  cfg.grid.n_nu = static_cast<int>(to_long(k, v));
              }},
             {"k_max",
              [&](const std::string& k, const std::string& v) {
                  cfg.grid.k_max = to_double(k, v);
              }},
             {"nu_min",
              [&](const std::string& k, const std::string& v) {
                  cfg.grid.nu_min = to_double(k, v);
              }},
             {"nu_max",
              [&](const std::string& k, const std::string& v) {
                  cfg.grid.nu_max = to_double(k, v);
              }},
         }},
        {"solver",
         {
             {"regularization",
              [&](const std::string&, const std::string& v) { cfg.regularization = v; }},
             {"sign", [&](const std::string&, const std::string& v) { cfg.sign = v; }},
             {"eta_rel",
              [&](const std::string& k, const std::string& v) { cfg.eta_rel = to_list(k, v); }},
             {"eta_floor",
              [&](const std::string& k, const std::string& v) { cfg.eta_floor = to_double(k, v); }},
             {"dense_cap",
              [&](const std::string& k, const std::string& v) {
                  cfg.dense_cap = static_cast<std::size_t>(to_long(k, v));
              }},
             {"method", [&](const std::string&, const std::string& v) { cfg.method = v; }},
             {"born_max_order",
              [&](const std::string& k, const std::string& v) {
                  cfg.born_max_order = static_cast<int>(to_long(k, v));
              }},
             {"born_tol",
              [&](const std::string& k, const std::string& v) { cfg.born_tol = to_double(k, v); }},
         }},
        {"kernel",
         {
             {"omega_max",
              [&](const std::string& k, const std::string& v) {
                  cfg.kernel.omega_max = to_double(k, v);
              }},
             {"per_panel",
              [&](const std::string& k, const std::string& v) {
                  cfg.kernel.per_panel = static_cast<int>(to_long(k, v));
              }},
             {"panels_per_period",
              [&](const std::string& k, const std::string& v) {
                  cfg.kernel.panels_per_period = to_double(k, v);
              }},
             {"min_panels",
              [&](const std::string& k, const std::string& v) {
                  cfg.kernel.min_panels = static_cast<int>(to_long(k, v));
              }},
             {"taper_fraction",
              [&](const std::string& k, const std::string& v) {
                  cfg.kernel.taper_fraction = to_double(k, v);
              }},
             {"taper_order",
              [&](const std::string& k, const std::string& v) {
                  cfg.kernel.taper_order = static_cast<int>(to_long(k, v));
              }},
             {"t_per_panel",
              [&](const std::string& k, const std::string& v) {
                  cfg.kernel.t_per_panel = static_cast<int>(to_long(k, v));
              }},
             {"pv_stencil",
              [&](const std::string& k, const std::string& v) {
                  cfg.kernel.pv_stencil = static_cast<int>(to_long(k, v));
              }},
         }},
        {"output",
         {
             {"directory", [&](const std::string&, const std::string& v) { cfg.directory = v; }},
             {"formats",
              [&](const std::string&, const std::string& v) { cfg.formats = to_string_list(v); }},
         }},
        {"run",
         {
             {"seed",
              [&](const std::string& k, const std::string& v) {
                  cfg.seed = static_cast<unsigned>(to_long(k, v));
              }},
             {"workers",
              [&](const std::string& k, const std::string& v) {
                  cfg.workers = static_cast<int>(to_long(k, v));
              }},
         }},
        {"study",
         {
             {"mode", [&](const std::string&, const std::string& v) { cfg.study_mode = v; }},
             {"scales",
              [&](const std::string& k, const std::string& v) { cfg.scales = to_list(k, v); }},
         }},
    };

    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema.count(section))
                throw ConfigError("unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("key '" + key + "' appears before any [section]");
        const auto& keys = schema.at(section);
        const auto it = keys.find(key);
        if (it == keys.end())
            throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
        it->second(key, value);
    }

    cfg.config_hash = sha256_hex(text);

    // validation beyond per-key parsing
    if (cfg.shape != "box" && cfg.shape != "sphere" && cfg.shape != "slab")
        throw ConfigError("medium.shape must be box, sphere or slab");
    if (cfg.dielectric != "constant" && cfg.dielectric != "drude_lorentz" &&
        cfg.dielectric != "tabulated")
        throw ConfigError("medium.dielectric must be constant, drude_lorentz or tabulated");
    if (cfg.units != "natural" && cfg.units != "si")
        throw ConfigError("medium.units must be natural or si");
    if (cfg.regularization != "complex_shift" && cfg.regularization != "pv_split")
        throw ConfigError("solver.regularization must be complex_shift or pv_split");
    if (cfg.sign != "plus" && cfg.sign != "minus")
        throw ConfigError("solver.sign must be plus or minus");
    if (cfg.method != "auto" && cfg.method != "dense_lu" && cfg.method != "woodbury")
        throw ConfigError("solver.method must be auto, dense_lu or woodbury");
    if (cfg.coupling_scale < 0.0) throw ConfigError("medium.coupling_scale must be >= 0");
    if (cfg.study_mode != "coupling" && cfg.study_mode != "volume")
        throw ConfigError("study.mode must be coupling or volume");
    cfg.grid.pv_mode = (cfg.regularization == "pv_split");
    cfg.make_policy().validate();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

MediumModel RunConfig::make_medium() const {
    DielectricModel diel;
    if (dielectric == "constant") {
        diel = DielectricModel(ConstantDielectric{eps_i, band_lo, band_hi}, strict_positivity);
    } else if (dielectric == "drude_lorentz") {
        if (plasma_freq.size() != damping.size() || plasma_freq.size() != resonance.size())
            throw ConfigError("drude_lorentz parameter lists must have equal lengths");
        DrudeLorentzDielectric d;
        for (std::size_t i = 0; i < plasma_freq.size(); ++i)
            d.terms.push_back({plasma_freq[i], damping[i], resonance[i]});
        diel = DielectricModel(d, strict_positivity);
    } else {
        TabulatedDielectric t;
        t.nu = nu_table;
        t.value = eps_table;
        diel = DielectricModel(t, strict_positivity);
    }
    if (coupling_scale != 1.0) diel = diel.scaled_coupling(coupling_scale);

    ShapeSpec spec;
    if (shape == "box")
        spec = BoxShape{lx, ly, lz};
    else if (shape == "sphere")
        spec = SphereShape{radius};
    else
        spec = SlabShape{lx, ly, thickness};

    const PhysicalConstants k =
        (units == "natural") ? PhysicalConstants::natural() : PhysicalConstants::si();
    return voxelize(spec, h, std::move(diel), k);
}

RegularizationPolicy RunConfig::make_policy() const {
    RegularizationPolicy p;
    p.kind = (regularization == "pv_split") ? RegularizationPolicy::Kind::pv_split
                                            : RegularizationPolicy::Kind::complex_shift;
    p.sign = (sign == "plus") ? I0Sign::plus : I0Sign::minus;
    p.eta_rel = eta_rel;
    p.eta_floor = eta_floor;
    p.pv_stencil = kernel.pv_stencil;
    return p;
}

SolveOptions RunConfig::make_solve_options() const {
    SolveOptions o;
    o.dense_cap = dense_cap;
    o.workers = workers;
    if (method == "dense_lu")
        o.method = SolveOptions::Method::dense_lu;
    else if (method == "woodbury")
        o.method = SolveOptions::Method::woodbury;
    else
        o.method = SolveOptions::Method::automatic;
    return o;
}

std::string RunConfig::to_json() const {
    nlohmann::json j;
    j["medium"] = {{"shape", shape},
                   {"lx", lx},
                   {"ly", ly},
                   {"lz", lz},
                   {"radius", radius},
                   {"thickness", thickness},
                   {"h", h},
                   {"dielectric", dielectric},
                   {"eps_i", eps_i},
                   {"band_lo", band_lo},
                   {"band_hi", band_hi},
                   {"coupling_scale", coupling_scale},
                   {"units", units}};
    j["grid"] = {{"n_k", grid.n_k},       {"n_theta", grid.n_theta}, {"n_eta", grid.n_eta},
                 {"n_nu", grid.n_nu},     {"k_max", grid.k_max},     {"nu_min", grid.nu_min},
                 {"nu_max", grid.nu_max}};
    j["solver"] = {{"regularization", regularization},
                   {"sign", sign},
                   {"eta_rel", eta_rel},
                   {"eta_floor", eta_floor},
                   {"dense_cap", dense_cap},
                   {"method", method},
                   {"born_max_order", born_max_order},
                   {"born_tol", born_tol}};
    j["kernel"] = {{"omega_max", kernel.omega_max},
                   {"per_panel", kernel.per_panel},
                   {"panels_per_period", kernel.panels_per_period},
                   {"min_panels", kernel.min_panels},
                   {"taper_fraction", kernel.taper_fraction},
                   {"taper_order", kernel.taper_order},
                   {"t_per_panel", kernel.t_per_panel},
                   {"pv_stencil", kernel.pv_stencil}};
    j["output"] = {{"directory", directory}, {"formats", formats}};
    j["run"] = {{"seed", seed}, {"workers", workers}};
    j["study"] = {{"mode", study_mode}, {"scales", scales}};
    j["config_hash"] = config_hash;
    return j.dump(2);
}

}  // namespace polariton
