#pragma once

// Locating the boundary between coupling-induced absorption (level
// attraction) and transparency (level repulsion) in coupling space.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hybrid/eigen_analysis.hpp"

namespace hybrid {

enum class CouplingComponent { coherent, dissipative };  // j, gamma

/// One real coupling parameter: the j or gamma of a mode pair.
struct ParamSelector {
    std::string a;
    std::string b;
    CouplingComponent component = CouplingComponent::dissipative;

    std::string label() const;
};

/// Parses "A-B:gamma" or "A-B:j".
ParamSelector parse_selector(std::string_view text);

double parameter_value(const SystemConfig& config, const ParamSelector& selector);

/// Copy of `config` with the selected coupling component set to `value`
/// (the pair is created with the other component 0 if absent).
SystemConfig with_parameter(SystemConfig config, const ParamSelector& selector, double value);

/// Midpoint of the intermediate band, (merge_gap + min_gap) / 2.
inline constexpr double kTransitionThreshold = (kClassifier.merge_gap + kClassifier.min_gap) / 2.0;
inline constexpr double kBisectionTolerance = 1e-4;

/// Minimum real-part separation of the zone's branch pair over the window.
/// The grid minimum is refined by golden-section search between its
/// neighbouring samples, so the value does not depend on grid resolution.
double gap_order_parameter(const SystemConfig& config, const ZoneSpec& zone);

struct TransitionResult {
    double critical = 0;   ///< GHz, midpoint of the final bracket
    double lo = 0;
    double hi = 0;
    double tolerance = kBisectionTolerance;
    double gap_at_lo = 0;  ///< order parameter at the initial bracket ends
    double gap_at_hi = 0;
    int evaluations = 0;
};

/// Bisection on gap_order_parameter(v) - kTransitionThreshold until the
/// bracket is at most 1e-4 GHz wide. Throws NoBracket when the initial
/// endpoints lie on the same side of the threshold.
TransitionResult find_transition(const SystemConfig& config, const ParamSelector& selector, double lo, double hi,
                                 const ZoneSpec& zone);

struct RegimeAxis {
    ParamSelector selector;
    double start = 0;
    double stop = 0;
    std::size_t count = 2;

    std::vector<double> values() const;  ///< count == 1 yields {start}
};

struct RegimeCell {
    CrossingClass real;
    CrossingClass imag;
    bool operator==(const RegimeCell&) const = default;
};

struct RegimeMap {
    RegimeAxis axis1;
    RegimeAxis axis2;
    std::vector<double> values1;
    std::vector<double> values2;
    std::vector<RegimeCell> labels;  ///< row-major: index i1 * values2.size() + i2

    const RegimeCell& at(std::size_t i1, std::size_t i2) const { return labels.at(i1 * values2.size() + i2); }
};

/// classify_zone at every (v1, v2) cell. Independent of `threads`.
RegimeMap regime_map(const SystemConfig& config, const RegimeAxis& axis1, const RegimeAxis& axis2,
                     const ZoneSpec& zone, unsigned threads = 1);

/// CSV: `v1,v2,real_class,imag_class`, axis1-major.
void export_regime_csv(const RegimeMap& map, std::ostream& out);
void export_regime_csv(const RegimeMap& map, const std::filesystem::path& destination);

}  // namespace hybrid
