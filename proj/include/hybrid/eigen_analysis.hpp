#pragma once

// Eigenvalue branches of the coupling matrix over a field sweep and
// level attraction / repulsion classification at mode crossings.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hybrid/model.hpp"

namespace hybrid {

/// values(i, b) is branch b at field_values[i]; columns are continuous in h.
struct BranchSet {
    std::vector<double> field_values;
    ComplexMatrix values;

    Eigen::Index branch_count() const noexcept { return values.cols(); }
};

/// Permutation p minimizing sum_b |current(p[b]) - previous(b)|^2.
/// Exhaustive for N <= 6, greedy nearest-pair assignment beyond.
std::vector<Eigen::Index> match_branches(const ComplexVector& previous, const ComplexVector& current);

/// Eigenvalues of H_coupling at every field point, tracked by continuity.
/// Branches are numbered by ascending real part at the first field point.
BranchSet eigen_sweep(const SystemConfig& config, unsigned threads = 1);

/// Same, over an explicit field list.
BranchSet eigen_sweep(const SystemConfig& config, const std::vector<double>& fields, unsigned threads = 1);

/// Branch CSV: `h_koe,branch,re_ghz,im_ghz`, field-major.
void export_branches_csv(const BranchSet& branches, std::ostream& out);
void export_branches_csv(const BranchSet& branches, const std::filesystem::path& destination);

enum class CrossingClass { attraction, repulsion, intermediate };
enum class Part { real, imag };

std::string_view to_string(CrossingClass c) noexcept;
std::optional<CrossingClass> parse_crossing_class(std::string_view s) noexcept;

/// Classifier thresholds, frozen after calibration against the bundled
/// three- and four-mode reference rows.
struct ClassifierThresholds {
    double merge_gap = 3e-3;        ///< GHz; "merged" when the gap is at most this
    double min_gap = 1.5e-2;        ///< GHz; repulsion when the gap never drops below this
    std::size_t merge_points = 3;   ///< contiguous merged samples needed for attraction
};
inline constexpr ClassifierThresholds kClassifier{};

/// Neighbourhood of the crossing between a field-tunable and a static mode.
struct ZoneSpec {
    std::string tunable;
    std::string fixed;
    FieldLinearFrequency tunable_law;
    double tunable_damping = 0;  ///< alpha + beta
    double fixed_frequency = 0;
    double fixed_damping = 0;    ///< alpha + beta
    double center_field = 0;     ///< kOe
    double window = 0;           ///< half-width, kOe

    std::string label() const { return tunable + "-" + fixed; }
    double crossing_frequency() const noexcept { return fixed_frequency; }
};

/// Solves slope * h + intercept = w_static. Default half-width is
/// 25 (alpha + beta)_static / slope. Throws NoSolution when the crossing lies
/// outside the field sweep and std::invalid_argument unless exactly one mode
/// of the pair is field-tunable.
ZoneSpec identify_zone(const SystemConfig& config, std::string_view a, std::string_view b);

/// Every tunable/static pair whose crossing falls inside the sweep, in
/// order of crossing field.
std::vector<ZoneSpec> crossing_zones(const SystemConfig& config);

struct ZoneReport {
    ZoneSpec zone;
    std::optional<CrossingClass> real_class;
    std::optional<CrossingClass> imag_class;
    double min_gap_real = 0;         ///< GHz
    double min_gap_imag = 0;         ///< GHz
    double merged_interval_real = 0; ///< kOe spanned by the longest merged run
    std::pair<Eigen::Index, Eigen::Index> branches{-1, -1};
};

/// Indices of field samples with |h - center| <= window.
std::vector<std::size_t> zone_window(const BranchSet& branches, const ZoneSpec& zone);

/// The two participating branches: optimal assignment of branches to the
/// uncoupled tunable and static resonances at the lower-field window edge.
std::pair<Eigen::Index, Eigen::Index> zone_branches(const BranchSet& branches, const ZoneSpec& zone);

/// Gap d(h) = |part(a) - part(b)| of the zone's branch pair over the window.
std::vector<double> zone_gaps(const BranchSet& branches, const ZoneSpec& zone, Part part);

/// Attraction: d <= merge_gap over >= merge_points contiguous samples.
/// Repulsion: min d >= min_gap. Intermediate otherwise.
/// Throws WindowTooNarrow if the window holds fewer than 7 samples.
ZoneReport classify_zone(const BranchSet& branches, const ZoneSpec& zone, Part part,
                         const ClassifierThresholds& thresholds = kClassifier);

/// Both parts in one report.
ZoneReport classify_zone(const BranchSet& branches, const ZoneSpec& zone,
                         const ClassifierThresholds& thresholds = kClassifier);

}  // namespace hybrid
