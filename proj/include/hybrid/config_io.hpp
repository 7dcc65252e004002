#pragma once

// JSON system descriptions and the bundled reproduction presets.
//
// {
//   "description": "...",                         (optional)
//   "modes": [{"name": "M",
//              "frequency": {"type": "field_linear", "slope_ghz_per_koe": 0.714, "intercept_ghz": 2.714},
//              "alpha_ghz": 2e-5, "beta_ghz": 1.8e-4},
//             {"name": "P1", "frequency": {"type": "static", "value_ghz": 3.4}, ...}],
//   "couplings": [{"a": "M", "b": "P1", "j_ghz": 0, "gamma_ghz": 0.1}],   (optional)
//   "field_sweep": {"start_koe": 0, "stop_koe": 3, "points": 301},         (optional)
//   "frequency_sweep": {"start_ghz": 2.5, "stop_ghz": 5, "points": 401}    (optional)
// }

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hybrid/model.hpp"

namespace hybrid {

/// Parses and fully validates a configuration document. Throws SchemaError
/// (with a JSON pointer), DuplicateMode or UnknownModeInCoupling.
SystemConfig parse_config(std::string_view text);

/// Canonical JSON form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const SystemConfig& config);

SystemConfig load_config(const std::filesystem::path& path);

/// Directory holding the bundled presets: $HYBRID_PRESET_DIR if set,
/// otherwise the install-time default.
std::filesystem::path preset_directory();

/// `name` as given if it exists, otherwise looked up in preset_directory().
std::filesystem::path resolve_config_path(const std::string& name);

/// One row of a reference parameter table with its expected labels.
struct ReproductionRow {
    std::string row;          ///< "d-f", "g-i", ...
    std::string preset;       ///< preset file name
    std::string tunable;
    std::string fixed;
    std::string real_class;   ///< expected label
    std::string imag_class;
};

/// Rows of "table1" (three-mode, M-P2 zone) or "table2" (four-mode, M-P3 zone).
std::vector<ReproductionRow> reproduction_rows(std::string_view table);

}  // namespace hybrid
