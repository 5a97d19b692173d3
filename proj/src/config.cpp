#include "ccpb/config.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ccpb {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigParse("value of '" + key + "' is not a number: " + s);
    }
}

long to_long(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigParse("value of '" + key + "' is not an integer: " + s);
    }
}

bool to_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigParse("value of '" + key + "' is not a boolean: " + s);
}

std::vector<double> to_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item, key));
    }
    if (out.empty()) throw ConfigParse("empty list for '" + key + "'");
    return out;
}

using Section = std::map<std::string, std::string>;
using Ini = std::map<std::string, Section>;

Ini parse_ini(const std::string& text) {
    Ini ini;
    std::string section;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigParse("malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigParse("expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigParse("empty key at line " + std::to_string(lineno));
        ini[section][key] = value;
    }
    return ini;
}

/// Converts a JSON config (same section/key structure) into the INI map so a
/// single interpreter serves both formats.
Ini json_to_ini(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigParse(std::string("invalid JSON config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigParse("JSON config must be an object of sections");
    Ini ini;
    for (auto& [section, body] : j.items()) {
        if (!body.is_object())
            throw ConfigParse("JSON section '" + section + "' must be an object");
        for (auto& [key, value] : body.items()) {
            std::string text_value;
            if (value.is_string()) {
                text_value = value.get<std::string>();
            } else if (value.is_array()) {
                std::ostringstream os;
                for (std::size_t i = 0; i < value.size(); ++i) {
                    if (i) os << ",";
                    os << value[i].dump();
                }
                text_value = os.str();
            } else {
                text_value = value.dump();
            }
            ini[section][key] = text_value;
        }
    }
    return ini;
}

class SectionReader {
public:
    SectionReader(const Ini& ini, const std::string& name) : name_(name) {
        auto it = ini.find(name);
        if (it != ini.end()) section_ = &it->second;
    }

    bool present() const { return section_ != nullptr; }

    std::optional<std::string> get(const std::string& key) {
        if (!section_) return std::nullopt;
        auto it = section_->find(key);
        if (it == section_->end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    void check_no_unknown_keys() const {
        if (!section_) return;
        for (const auto& [key, value] : *section_)
            if (!used_.count(key))
                throw ConfigParse("unknown key '" + key + "' in section [" + name_ + "]");
    }

private:
    std::string name_;
    const Section* section_ = nullptr;
    std::set<std::string> used_;
};

RunConfig interpret(const Ini& ini) {
    for (const auto& [section, body] : ini) {
        (void)body;
        if (section != "model" && section != "dielectric" && section != "mesh" &&
            section != "solver" && section != "diagnostics" && section != "output")
            throw ConfigParse("unknown section [" + section + "]");
    }

    RunConfig cfg;

    SectionReader model(ini, "model");
    if (auto v = model.get("A")) cfg.params.A = to_double(*v, "A");
    if (auto v = model.get("B")) cfg.params.B = to_double(*v, "B");
    if (auto v = model.get("p")) cfg.params.p = to_double(*v, "p");
    if (auto v = model.get("q")) cfg.params.q = to_double(*v, "q");
    if (auto v = model.get("epsilon")) cfg.params.epsilon = to_double(*v, "epsilon");
    if (auto v = model.get("R")) cfg.params.R = to_double(*v, "R");
    if (auto v = model.get("N")) cfg.params.N = static_cast<int>(to_long(*v, "N"));
    if (auto v = model.get("eta")) cfg.params.eta = to_double(*v, "eta");
    model.check_no_unknown_keys();

    SectionReader diel(ini, "dielectric");
    if (diel.present()) {
        const std::string type = diel.get("type").value_or("constant");
        if (type == "constant") {
            const double g0 = to_double(diel.get("g0").value_or("1"), "g0");
            cfg.params.dielectric = DielectricProfile::constant(g0);
        } else if (type == "polynomial") {
            auto coeffs = diel.get("coeffs");
            if (!coeffs) throw ConfigParse("polynomial dielectric needs 'coeffs'");
            cfg.params.dielectric = DielectricProfile::polynomial(to_list(*coeffs, "coeffs"));
        } else if (type == "tabulated") {
            auto r = diel.get("r");
            auto values = diel.get("values");
            if (!r || !values) throw ConfigParse("tabulated dielectric needs 'r' and 'values'");
            try {
                cfg.params.dielectric =
                    DielectricProfile::tabulated(to_list(*r, "r"), to_list(*values, "values"));
            } catch (const Error& e) {
                throw ConfigParse(e.what());
            }
        } else {
            throw ConfigParse("unknown dielectric type: " + type);
        }
        diel.check_no_unknown_keys();
    }

    cfg.params = validate_params(cfg.params);

    SectionReader mesh(ini, "mesh");
    if (mesh.present()) {
        const std::string type = mesh.get("type").value_or("geometric");
        if (type == "uniform") {
            UniformSpec spec;
            if (auto v = mesh.get("cells"))
                spec.cells = static_cast<std::size_t>(to_long(*v, "cells"));
            cfg.mesh = spec;
        } else if (type == "geometric") {
            GeometricSpec spec = GeometricSpec::default_for(cfg.params);
            if (auto v = mesh.get("h0")) spec.h0 = to_double(*v, "h0");
            if (auto v = mesh.get("ratio")) spec.ratio = to_double(*v, "ratio");
            if (auto v = mesh.get("cap")) spec.cap = to_double(*v, "cap");
            cfg.mesh = spec;
        } else if (type == "two_zone") {
            TwoZoneSpec spec{};
            auto t = mesh.get("transition");
            auto bc = mesh.get("bulk_cells");
            auto lc = mesh.get("layer_cells");
            if (!t || !bc || !lc)
                throw ConfigParse(
                    "two_zone mesh needs 'transition', 'bulk_cells' and 'layer_cells'");
            spec.transition = to_double(*t, "transition");
            spec.bulk_cells = static_cast<std::size_t>(to_long(*bc, "bulk_cells"));
            spec.layer_cells = static_cast<std::size_t>(to_long(*lc, "layer_cells"));
            cfg.mesh = spec;
        } else {
            throw ConfigParse("unknown mesh type: " + type);
        }
        mesh.check_no_unknown_keys();
    }

    SectionReader solver(ini, "solver");
    if (auto v = solver.get("tol")) cfg.solver.newton.tol = to_double(*v, "tol");
    if (auto v = solver.get("max_iter"))
        cfg.solver.newton.max_iter = static_cast<int>(to_long(*v, "max_iter"));
    if (auto v = solver.get("ladder")) cfg.solver.ladder = parse_ladder(*v);
    if (auto v = solver.get("seed_with_profile"))
        cfg.solver.seed_with_profile = to_bool(*v, "seed_with_profile");
    solver.check_no_unknown_keys();

    SectionReader diag(ini, "diagnostics");
    if (auto v = diag.get("kappa")) cfg.diagnostics.kappa = to_double(*v, "kappa");
    if (auto v = diag.get("thetas")) cfg.diagnostics.thetas = to_list(*v, "thetas");
    if (auto v = diag.get("cap_gamma")) cfg.diagnostics.cap_gamma = to_double(*v, "cap_gamma");
    if (auto v = diag.get("cap_gammas")) cfg.cap_gammas = to_list(*v, "cap_gammas");
    if (auto v = diag.get("tol_xi")) cfg.diagnostics.tolerances.xi = to_double(*v, "tol_xi");
    if (auto v = diag.get("tol_coeff"))
        cfg.diagnostics.tolerances.coeff = to_double(*v, "tol_coeff");
    if (auto v = diag.get("tol_weight"))
        cfg.diagnostics.tolerances.weight_rel = to_double(*v, "tol_weight");
    if (auto v = diag.get("tol_cap"))
        cfg.diagnostics.tolerances.cap_rel = to_double(*v, "tol_cap");
    if (auto v = diag.get("tol_slope"))
        cfg.diagnostics.tolerances.slope = to_double(*v, "tol_slope");
    diag.check_no_unknown_keys();
    cfg.diagnostics.newton = cfg.solver.newton;
    cfg.diagnostics.seed_with_profile = cfg.solver.seed_with_profile;

    SectionReader output(ini, "output");
    if (auto v = output.get("dir")) cfg.output.dir = *v;
    if (auto v = output.get("format")) {
        if (*v != "csv" && *v != "json") throw ConfigParse("format must be csv or json");
        cfg.output.format = *v;
    }
    output.check_no_unknown_keys();

    if (!cfg.solver.ladder.empty()) {
        for (std::size_t i = 1; i < cfg.solver.ladder.size(); ++i)
            if (!(cfg.solver.ladder[i] < cfg.solver.ladder[i - 1]))
                throw ConfigParse("ladder must be strictly decreasing");
    }

    if (cfg.mesh) {
        // Fixed mesh spec requested: use it at every ladder epsilon.
        const MeshSpec spec = *cfg.mesh;
        cfg.diagnostics.mesh_policy = [spec](const ModelParams&) { return spec; };
    }

    return cfg;
}

}  // namespace

std::vector<double> parse_ladder(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        auto ladder = to_list(text, "ladder");
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            if (!(ladder[i] > 0.0))
                throw ConfigParse("ladder epsilons must be positive");
            if (i > 0 && !(ladder[i] < ladder[i - 1]))
                throw ConfigParse("ladder epsilons must be strictly decreasing");
        }
        return ladder;
    }
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
        throw ConfigParse("ladder must be START:FACTOR:COUNT or a comma list");
    const double start = to_double(trim(a), "ladder start");
    const double factor = to_double(trim(b), "ladder factor");
    const long count = to_long(trim(c), "ladder count");
    if (!(start > 0.0) || !(factor > 0.0) || factor >= 1.0 || count < 1)
        throw ConfigParse("ladder needs start > 0, factor in (0,1), count >= 1");
    std::vector<double> out;
    double eps = start;
    for (long k = 0; k < count; ++k) {
        out.push_back(eps);
        eps *= factor;
    }
    return out;
}

RunConfig parse_config_text(const std::string& text) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') return interpret(json_to_ini(text));
    return interpret(parse_ini(text));
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParse("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str());
}

}  // namespace ccpb
