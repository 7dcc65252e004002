#include "hybrid/config_io.hpp"

#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "hybrid/errors.hpp"

#ifndef HYBRID_PRESET_DIR
#define HYBRID_PRESET_DIR "presets"
#endif

namespace hybrid {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string join(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const char* type_name(const json& j) { return j.type_name(); }

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, std::string("expected object, got ") + type_name(j));
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw SchemaError(join(path, key), "unknown key");
    }
}

const json& field(const json& j, const std::string& path, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(join(path, key), "required key missing");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, std::string("expected number, got ") + type_name(j));
    return j.get<double>();
}

double number_or(const json& j, const std::string& path, const std::string& key, double fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : number(*it, join(path, key));
}

std::string string_value(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, std::string("expected string, got ") + type_name(j));
    return j.get<std::string>();
}

std::size_t count_or(const json& j, const std::string& path, const std::string& key, std::size_t fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer() || it->get<long long>() < 2) {
        throw SchemaError(join(path, key), "expected integer >= 2");
    }
    return static_cast<std::size_t>(it->get<long long>());
}

FrequencyLaw parse_law(const json& j, const std::string& path) {
    require_object(j, path);
    const std::string type = string_value(field(j, path, "type"), join(path, "type"));
    if (type == "static") {
        reject_unknown(j, path, {"type", "value_ghz"});
        const double v = number(field(j, path, "value_ghz"), join(path, "value_ghz"));
        if (!(v > 0)) throw SchemaError(join(path, "value_ghz"), "must be > 0");
        return StaticFrequency{v};
    }
    if (type == "field_linear") {
        reject_unknown(j, path, {"type", "slope_ghz_per_koe", "intercept_ghz"});
        const double slope = number(field(j, path, "slope_ghz_per_koe"), join(path, "slope_ghz_per_koe"));
        const double intercept = number(field(j, path, "intercept_ghz"), join(path, "intercept_ghz"));
        if (!(intercept >= 0)) throw SchemaError(join(path, "intercept_ghz"), "must be >= 0");
        return FieldLinearFrequency{slope, intercept};
    }
    throw SchemaError(join(path, "type"), "expected \"static\" or \"field_linear\", got \"" + type + "\"");
}

ModeSpec parse_mode(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"name", "frequency", "alpha_ghz", "beta_ghz"});
    ModeSpec m;
    m.name = string_value(field(j, path, "name"), join(path, "name"));
    if (m.name.empty()) throw SchemaError(join(path, "name"), "must not be empty");
    m.frequency = parse_law(field(j, path, "frequency"), join(path, "frequency"));
    m.alpha = number(field(j, path, "alpha_ghz"), join(path, "alpha_ghz"));
    m.beta = number(field(j, path, "beta_ghz"), join(path, "beta_ghz"));
    if (!(m.alpha >= 0)) throw SchemaError(join(path, "alpha_ghz"), "must be >= 0");
    if (!(m.beta >= 0)) throw SchemaError(join(path, "beta_ghz"), "must be >= 0");
    return m;
}

CouplingSpec parse_coupling(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"a", "b", "j_ghz", "gamma_ghz"});
    CouplingSpec c;
    c.a = string_value(field(j, path, "a"), join(path, "a"));
    c.b = string_value(field(j, path, "b"), join(path, "b"));
    c.j = number_or(j, path, "j_ghz", 0.0);
    c.gamma = number_or(j, path, "gamma_ghz", 0.0);
    return c;
}

Sweep parse_sweep(const json& j, const std::string& path, const char* start_key, const char* stop_key,
                  std::size_t default_points) {
    require_object(j, path);
    reject_unknown(j, path, {start_key, stop_key, "points"});
    Sweep s;
    s.start = number(field(j, path, start_key), join(path, start_key));
    s.stop = number(field(j, path, stop_key), join(path, stop_key));
    s.points = count_or(j, path, "points", default_points);
    if (!(s.start < s.stop)) throw SchemaError(join(path, stop_key), "must be greater than start");
    return s;
}

}  // namespace

SystemConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SchemaError("/", std::string("malformed JSON: ") + e.what());
    }
    require_object(doc, "");
    reject_unknown(doc, "", {"description", "modes", "couplings", "field_sweep", "frequency_sweep"});

    SystemConfig config;
    if (auto it = doc.find("description"); it != doc.end()) config.description = string_value(*it, "/description");

    const json& modes = field(doc, "", "modes");
    if (!modes.is_array() || modes.empty()) throw SchemaError("/modes", "expected non-empty array");
    for (std::size_t i = 0; i < modes.size(); ++i) config.modes.push_back(parse_mode(modes[i], join("/modes", i)));

    if (auto it = doc.find("couplings"); it != doc.end()) {
        if (!it->is_array()) throw SchemaError("/couplings", "expected array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            config.couplings.push_back(parse_coupling((*it)[i], join("/couplings", i)));
        }
    }
    if (auto it = doc.find("field_sweep"); it != doc.end()) {
        config.field_sweep = parse_sweep(*it, "/field_sweep", "start_koe", "stop_koe", kDefaultFieldPoints);
    }
    if (auto it = doc.find("frequency_sweep"); it != doc.end()) {
        config.frequency_sweep = parse_sweep(*it, "/frequency_sweep", "start_ghz", "stop_ghz", kDefaultFrequencyPoints);
    }
    config.validate();
    return config;
}

std::string serialize_config(const SystemConfig& config) {
    json doc = json::object();
    if (!config.description.empty()) doc["description"] = config.description;
    json modes = json::array();
    for (const auto& m : config.modes) {
        json law;
        if (const auto* s = std::get_if<StaticFrequency>(&m.frequency)) {
            law = {{"type", "static"}, {"value_ghz", s->value_ghz}};
        } else {
            const auto& f = std::get<FieldLinearFrequency>(m.frequency);
            law = {{"type", "field_linear"}, {"slope_ghz_per_koe", f.slope_ghz_per_koe}, {"intercept_ghz", f.intercept_ghz}};
        }
        modes.push_back({{"name", m.name}, {"frequency", law}, {"alpha_ghz", m.alpha}, {"beta_ghz", m.beta}});
    }
    doc["modes"] = modes;
    json couplings = json::array();
    for (const auto& c : config.couplings) {
        couplings.push_back({{"a", c.a}, {"b", c.b}, {"j_ghz", c.j}, {"gamma_ghz", c.gamma}});
    }
    doc["couplings"] = couplings;
    doc["field_sweep"] = {{"start_koe", config.field_sweep.start},
                          {"stop_koe", config.field_sweep.stop},
                          {"points", config.field_sweep.points}};
    doc["frequency_sweep"] = {{"start_ghz", config.frequency_sweep.start},
                              {"stop_ghz", config.frequency_sweep.stop},
                              {"points", config.frequency_sweep.points}};
    return doc.dump(2) + "\n";
}

SystemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::filesystem::path preset_directory() {
    if (const char* env = std::getenv("HYBRID_PRESET_DIR"); env && *env) return env;
    return HYBRID_PRESET_DIR;
}

std::filesystem::path resolve_config_path(const std::string& name) {
    const std::filesystem::path direct(name);
    if (std::filesystem::exists(direct)) return direct;
    const auto bundled = preset_directory() / direct;
    if (std::filesystem::exists(bundled)) return bundled;
    throw IoError("config '" + name + "' not found (also looked in " + preset_directory().string() + ")");
}

std::vector<ReproductionRow> reproduction_rows(std::string_view table) {
    if (table == "table1") {
        return {
            {"d-f", "three_mode_table1_row_df.json", "M", "P2", "Attraction", "Repulsion"},
            {"g-i", "three_mode_table1_row_gi.json", "M", "P2", "Intermediate", "Repulsion"},
            {"j-l", "three_mode_table1_row_jl.json", "M", "P2", "Intermediate", "Intermediate"},
            {"m-o", "three_mode_table1_row_mo.json", "M", "P2", "Repulsion", "Attraction"},
        };
    }
    if (table == "table2") {
        return {
            {"d-f", "four_mode_table2_row_df.json", "M", "P3", "Attraction", "Repulsion"},
            {"g-i", "four_mode_table2_row_gi.json", "M", "P3", "Intermediate", "Repulsion"},
            {"j-l", "four_mode_table2_row_jl.json", "M", "P3", "Intermediate", "Repulsion"},
            {"m-o", "four_mode_table2_row_mo.json", "M", "P3", "Repulsion", "Attraction"},
        };
    }
    throw std::invalid_argument("unknown table '" + std::string(table) + "' (expected table1 or table2)");
}

}  // namespace hybrid
