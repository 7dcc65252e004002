#include "hybrid/eigen_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hybrid/errors.hpp"
#include "io_util.hpp"
#include "parallel.hpp"

namespace hybrid {

namespace {

constexpr Eigen::Index kExhaustiveLimit = 6;
constexpr std::size_t kMinWindowPoints = 7;

double part_of(cdouble z, Part p) { return p == Part::real ? z.real() : z.imag(); }

}  // namespace

std::vector<Eigen::Index> match_branches(const ComplexVector& previous, const ComplexVector& current) {
    const Eigen::Index n = previous.size();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Eigen::Index{0});
    if (n <= 1) return perm;

    if (n <= kExhaustiveLimit) {
        std::vector<Eigen::Index> best = perm;
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double cost = 0;
            for (Eigen::Index b = 0; b < n && cost < best_cost; ++b) {
                cost += std::norm(current(perm[static_cast<std::size_t>(b)]) - previous(b));
            }
            if (cost < best_cost) {
                best_cost = cost;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    struct Candidate {
        double dist;
        Eigen::Index branch;
        Eigen::Index value;
    };
    std::vector<Candidate> candidates;
    candidates.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index b = 0; b < n; ++b) {
        for (Eigen::Index v = 0; v < n; ++v) candidates.push_back({std::norm(current(v) - previous(b)), b, v});
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& x, const Candidate& y) { return x.dist < y.dist; });
    std::vector<bool> branch_done(static_cast<std::size_t>(n), false), value_used(static_cast<std::size_t>(n), false);
    for (const auto& c : candidates) {
        if (branch_done[static_cast<std::size_t>(c.branch)] || value_used[static_cast<std::size_t>(c.value)]) continue;
        perm[static_cast<std::size_t>(c.branch)] = c.value;
        branch_done[static_cast<std::size_t>(c.branch)] = true;
        value_used[static_cast<std::size_t>(c.value)] = true;
    }
    return perm;
}

BranchSet eigen_sweep(const SystemConfig& config, unsigned threads) {
    return eigen_sweep(config, config.field_sweep.values(), threads);
}

BranchSet eigen_sweep(const SystemConfig& config, const std::vector<double>& fields, unsigned threads) {
    const auto n = static_cast<Eigen::Index>(config.modes.size());
    const auto points = fields.size();
    std::vector<ComplexVector> raw(points);
    detail::parallel_for(points, threads, [&](std::size_t i) {
        try {
            raw[i] = linalg::eigenvalues<double>(effective_hamiltonian(config, fields[i])).values;
        } catch (const NoConvergence& e) {
            std::ostringstream os;
            os << "eigensolver failed at h_dc=" << fields[i] << " kOe: " << e.what();
            throw NoConvergence(os.str());
        }
    });

    BranchSet out;
    out.field_values = fields;
    out.values.resize(static_cast<Eigen::Index>(points), n);
    if (points == 0) return out;

    ComplexVector previous = raw[0];
    std::sort(previous.data(), previous.data() + n, [](cdouble x, cdouble y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    out.values.row(0) = previous.transpose();
    for (std::size_t i = 1; i < points; ++i) {
        const auto perm = match_branches(previous, raw[i]);
        for (Eigen::Index b = 0; b < n; ++b) previous(b) = raw[i](perm[static_cast<std::size_t>(b)]);
        out.values.row(static_cast<Eigen::Index>(i)) = previous.transpose();
    }
    return out;
}

void export_branches_csv(const BranchSet& branches, std::ostream& out) {
    out << "h_koe,branch,re_ghz,im_ghz\n";
    for (std::size_t i = 0; i < branches.field_values.size(); ++i) {
        for (Eigen::Index b = 0; b < branches.branch_count(); ++b) {
            const cdouble z = branches.values(static_cast<Eigen::Index>(i), b);
            out << io::format_sig9(branches.field_values[i]) << ',' << b << ',' << io::format_sig9(z.real()) << ','
                << io::format_sig9(z.imag()) << '\n';
        }
    }
}

void export_branches_csv(const BranchSet& branches, const std::filesystem::path& destination) {
    io::write_atomically(destination, [&](std::ostream& out) { export_branches_csv(branches, out); });
}

std::string_view to_string(CrossingClass c) noexcept {
    switch (c) {
        case CrossingClass::attraction: return "Attraction";
        case CrossingClass::repulsion: return "Repulsion";
        case CrossingClass::intermediate: return "Intermediate";
    }
    return "Intermediate";
}

std::optional<CrossingClass> parse_crossing_class(std::string_view s) noexcept {
    if (s == "Attraction") return CrossingClass::attraction;
    if (s == "Repulsion") return CrossingClass::repulsion;
    if (s == "Intermediate") return CrossingClass::intermediate;
    return std::nullopt;
}

ZoneSpec identify_zone(const SystemConfig& config, std::string_view a, std::string_view b) {
    const ModeSpec& ma = config.modes[config.mode_index(a)];
    const ModeSpec& mb = config.modes[config.mode_index(b)];
    const auto* la = std::get_if<FieldLinearFrequency>(&ma.frequency);
    const auto* lb = std::get_if<FieldLinearFrequency>(&mb.frequency);
    if ((la == nullptr) == (lb == nullptr)) {
        throw std::invalid_argument("zone " + std::string(a) + "-" + std::string(b) +
                                    " needs exactly one field-tunable mode");
    }
    const ModeSpec& tunable = la ? ma : mb;
    const ModeSpec& fixed = la ? mb : ma;
    const FieldLinearFrequency law = la ? *la : *lb;
    if (law.slope_ghz_per_koe == 0) {
        throw NoSolution("tunable mode '" + tunable.name + "' does not tune with field");
    }

    ZoneSpec zone;
    zone.tunable = tunable.name;
    zone.fixed = fixed.name;
    zone.tunable_law = law;
    zone.tunable_damping = tunable.alpha + tunable.beta;
    zone.fixed_frequency = std::get<StaticFrequency>(fixed.frequency).value_ghz;
    zone.fixed_damping = fixed.alpha + fixed.beta;
    zone.center_field = (zone.fixed_frequency - law.intercept_ghz) / law.slope_ghz_per_koe;
    const Sweep& sweep = config.field_sweep;
    if (!(zone.center_field >= sweep.start && zone.center_field <= sweep.stop)) {
        std::ostringstream os;
        os << "crossing " << zone.label() << " at h=" << zone.center_field << " kOe lies outside the sweep ["
           << sweep.start << ", " << sweep.stop << "]";
        throw NoSolution(os.str());
    }
    const double half = 25.0 * zone.fixed_damping / std::abs(law.slope_ghz_per_koe);
    zone.window = std::min(half, sweep.stop - sweep.start);
    return zone;
}

std::vector<ZoneSpec> crossing_zones(const SystemConfig& config) {
    std::vector<ZoneSpec> zones;
    for (const auto& t : config.modes) {
        if (!std::holds_alternative<FieldLinearFrequency>(t.frequency)) continue;
        for (const auto& s : config.modes) {
            if (!std::holds_alternative<StaticFrequency>(s.frequency)) continue;
            try {
                zones.push_back(identify_zone(config, t.name, s.name));
            } catch (const NoSolution&) {
            }
        }
    }
    std::stable_sort(zones.begin(), zones.end(),
                     [](const ZoneSpec& x, const ZoneSpec& y) { return x.center_field < y.center_field; });
    return zones;
}

std::vector<std::size_t> zone_window(const BranchSet& branches, const ZoneSpec& zone) {
    std::vector<std::size_t> idx;
    const double slack = 1e-9 * std::max(1.0, zone.window);
    for (std::size_t i = 0; i < branches.field_values.size(); ++i) {
        if (std::abs(branches.field_values[i] - zone.center_field) <= zone.window + slack) idx.push_back(i);
    }
    return idx;
}

std::pair<Eigen::Index, Eigen::Index> zone_branches(const BranchSet& branches, const ZoneSpec& zone) {
    const auto idx = zone_window(branches, zone);
    if (idx.size() < kMinWindowPoints) {
        throw WindowTooNarrow("zone " + zone.label() + " window holds " + std::to_string(idx.size()) +
                              " field samples; at least 7 are required");
    }
    if (branches.branch_count() < 2) throw WindowTooNarrow("zone " + zone.label() + " needs two branches");
    const auto edge = static_cast<Eigen::Index>(idx.front());
    const double h = branches.field_values[idx.front()];
    const cdouble tunable(zone.tunable_law.slope_ghz_per_koe * h + zone.tunable_law.intercept_ghz,
                          -zone.tunable_damping);
    const cdouble fixed(zone.fixed_frequency, -zone.fixed_damping);

    std::pair<Eigen::Index, Eigen::Index> best{-1, -1};
    double best_cost = std::numeric_limits<double>::infinity();
    for (Eigen::Index bt = 0; bt < branches.branch_count(); ++bt) {
        for (Eigen::Index bs = 0; bs < branches.branch_count(); ++bs) {
            if (bs == bt) continue;
            const double cost = std::abs(branches.values(edge, bt) - tunable) + std::abs(branches.values(edge, bs) - fixed);
            if (cost < best_cost) {
                best_cost = cost;
                best = {bt, bs};
            }
        }
    }
    return best;
}

std::vector<double> zone_gaps(const BranchSet& branches, const ZoneSpec& zone, Part part) {
    const auto [a, b] = zone_branches(branches, zone);
    std::vector<double> gaps;
    for (std::size_t i : zone_window(branches, zone)) {
        const auto r = static_cast<Eigen::Index>(i);
        gaps.push_back(std::abs(part_of(branches.values(r, a), part) - part_of(branches.values(r, b), part)));
    }
    return gaps;
}

ZoneReport classify_zone(const BranchSet& branches, const ZoneSpec& zone, Part part,
                         const ClassifierThresholds& thresholds) {
    ZoneReport report;
    report.zone = zone;
    report.branches = zone_branches(branches, zone);
    const auto idx = zone_window(branches, zone);
    const auto gaps = zone_gaps(branches, zone, part);

    const double min_gap = *std::min_element(gaps.begin(), gaps.end());
    std::size_t run = 0, best_run = 0, best_end = 0;
    for (std::size_t k = 0; k < gaps.size(); ++k) {
        run = gaps[k] <= thresholds.merge_gap ? run + 1 : 0;
        if (run > best_run) {
            best_run = run;
            best_end = k;
        }
    }

    CrossingClass label = CrossingClass::intermediate;
    if (best_run >= thresholds.merge_points) {
        label = CrossingClass::attraction;
    } else if (min_gap >= thresholds.min_gap) {
        label = CrossingClass::repulsion;
    }

    if (part == Part::real) {
        report.real_class = label;
        report.min_gap_real = min_gap;
        if (best_run > 0) {
            report.merged_interval_real =
                branches.field_values[idx[best_end]] - branches.field_values[idx[best_end + 1 - best_run]];
        }
    } else {
        report.imag_class = label;
        report.min_gap_imag = min_gap;
    }
    return report;
}

ZoneReport classify_zone(const BranchSet& branches, const ZoneSpec& zone, const ClassifierThresholds& thresholds) {
    ZoneReport report = classify_zone(branches, zone, Part::real, thresholds);
    const ZoneReport imag = classify_zone(branches, zone, Part::imag, thresholds);
    report.imag_class = imag.imag_class;
    report.min_gap_imag = imag.min_gap_imag;
    return report;
}

}  // namespace hybrid
