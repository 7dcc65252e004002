#include "hybrid/transition.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "hybrid/errors.hpp"
#include "io_util.hpp"
#include "parallel.hpp"

namespace hybrid {

std::string ParamSelector::label() const {
    return a + "-" + b + (component == CouplingComponent::coherent ? ":j" : ":gamma");
}

ParamSelector parse_selector(std::string_view text) {
    const auto colon = text.rfind(':');
    const auto dash = text.find('-');
    if (colon == std::string_view::npos || dash == std::string_view::npos || dash > colon || dash == 0 ||
        dash + 1 == colon) {
        throw std::invalid_argument("selector must look like A-B:gamma or A-B:j, got '" + std::string(text) + "'");
    }
    ParamSelector s;
    s.a = std::string(text.substr(0, dash));
    s.b = std::string(text.substr(dash + 1, colon - dash - 1));
    const auto comp = text.substr(colon + 1);
    if (comp == "gamma") {
        s.component = CouplingComponent::dissipative;
    } else if (comp == "j") {
        s.component = CouplingComponent::coherent;
    } else {
        throw std::invalid_argument("unknown coupling component '" + std::string(comp) + "'");
    }
    return s;
}

double parameter_value(const SystemConfig& config, const ParamSelector& selector) {
    const CouplingSpec* c = config.find_coupling(selector.a, selector.b);
    if (!c) return 0.0;
    return selector.component == CouplingComponent::coherent ? c->j : c->gamma;
}

SystemConfig with_parameter(SystemConfig config, const ParamSelector& selector, double value) {
    CouplingSpec& c = config.coupling(selector.a, selector.b);
    (selector.component == CouplingComponent::coherent ? c.j : c.gamma) = value;
    return config;
}

namespace {

// Real-part gap of the zone pair at an arbitrary field h in
// [fields[k], fields[k+1]], matched against the interpolated branch values.
double gap_between(const SystemConfig& config, const BranchSet& bs, std::size_t k, double h,
                   std::pair<Eigen::Index, Eigen::Index> pair) {
    const double h0 = bs.field_values[k];
    const double h1 = bs.field_values[k + 1];
    const double t = (h - h0) / (h1 - h0);
    const auto r0 = static_cast<Eigen::Index>(k);
    const ComplexVector reference = ((1.0 - t) * bs.values.row(r0) + t * bs.values.row(r0 + 1)).transpose();
    const ComplexVector ev = linalg::eigenvalues<double>(effective_hamiltonian(config, h)).values;
    const auto perm = match_branches(reference, ev);
    return std::abs(ev(perm[static_cast<std::size_t>(pair.first)]).real() -
                    ev(perm[static_cast<std::size_t>(pair.second)]).real());
}

double golden_min(const SystemConfig& config, const BranchSet& bs, std::size_t k, double lo, double hi,
                  std::pair<Eigen::Index, Eigen::Index> pair) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = gap_between(config, bs, k, x1, pair);
    double f2 = gap_between(config, bs, k, x2, pair);
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = gap_between(config, bs, k, x1, pair);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = gap_between(config, bs, k, x2, pair);
        }
    }
    return std::min(f1, f2);
}

}  // namespace

double gap_order_parameter(const SystemConfig& config, const ZoneSpec& zone) {
    const BranchSet bs = eigen_sweep(config);
    const auto idx = zone_window(bs, zone);
    const auto pair = zone_branches(bs, zone);
    const auto gaps = zone_gaps(bs, zone, Part::real);
    const auto at = static_cast<std::size_t>(std::min_element(gaps.begin(), gaps.end()) - gaps.begin());
    double best = gaps[at];
    if (at > 0) best = std::min(best, golden_min(config, bs, idx[at - 1], bs.field_values[idx[at - 1]],
                                                 bs.field_values[idx[at]], pair));
    if (at + 1 < idx.size()) best = std::min(best, golden_min(config, bs, idx[at], bs.field_values[idx[at]],
                                                              bs.field_values[idx[at + 1]], pair));
    return best;
}

TransitionResult find_transition(const SystemConfig& config, const ParamSelector& selector, double lo, double hi,
                                 const ZoneSpec& zone) {
    if (!(lo < hi)) throw std::invalid_argument("find_transition: lo must be < hi");
    const auto objective = [&](double v) {
        return gap_order_parameter(with_parameter(config, selector, v), zone) - kTransitionThreshold;
    };
    TransitionResult result;
    double f_lo = objective(lo);
    const double f_hi = objective(hi);
    result.gap_at_lo = f_lo + kTransitionThreshold;
    result.gap_at_hi = f_hi + kTransitionThreshold;
    result.evaluations = 2;
    if ((f_lo < 0) == (f_hi < 0)) {
        std::ostringstream os;
        os << "order parameter does not cross " << kTransitionThreshold << " GHz on [" << lo << ", " << hi
           << "] for " << selector.label() << " (gap " << result.gap_at_lo << " -> " << result.gap_at_hi << ")";
        throw NoBracket(os.str());
    }
    while (hi - lo > kBisectionTolerance) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = objective(mid);
        ++result.evaluations;
        if ((f_mid < 0) == (f_lo < 0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    result.lo = lo;
    result.hi = hi;
    result.critical = 0.5 * (lo + hi);
    return result;
}

std::vector<double> RegimeAxis::values() const {
    if (count == 0) throw std::invalid_argument("regime axis needs at least one value");
    if (count == 1) return {start};
    return Sweep{start, stop, count}.values();
}

RegimeMap regime_map(const SystemConfig& config, const RegimeAxis& axis1, const RegimeAxis& axis2,
                     const ZoneSpec& zone, unsigned threads) {
    RegimeMap map;
    map.axis1 = axis1;
    map.axis2 = axis2;
    map.values1 = axis1.values();
    map.values2 = axis2.values();
    const std::size_t n2 = map.values2.size();
    map.labels.assign(map.values1.size() * n2, RegimeCell{CrossingClass::intermediate, CrossingClass::intermediate});
    detail::parallel_for(map.labels.size(), threads, [&](std::size_t cell) {
        const double v1 = map.values1[cell / n2];
        const double v2 = map.values2[cell % n2];
        try {
            const SystemConfig local = with_parameter(with_parameter(config, axis1.selector, v1), axis2.selector, v2);
            const ZoneReport r = classify_zone(eigen_sweep(local), zone);
            map.labels[cell] = RegimeCell{*r.real_class, *r.imag_class};
        } catch (const Error& e) {
            std::ostringstream os;
            os << "regime map cell (" << v1 << ", " << v2 << "): " << e.what();
            throw Error(os.str());
        }
    });
    return map;
}

void export_regime_csv(const RegimeMap& map, std::ostream& out) {
    out << "v1,v2,real_class,imag_class\n";
    for (std::size_t i = 0; i < map.values1.size(); ++i) {
        for (std::size_t j = 0; j < map.values2.size(); ++j) {
            const RegimeCell& c = map.at(i, j);
            out << io::format_sig9(map.values1[i]) << ',' << io::format_sig9(map.values2[j]) << ','
                << to_string(c.real) << ',' << to_string(c.imag) << '\n';
        }
    }
}

void export_regime_csv(const RegimeMap& map, const std::filesystem::path& destination) {
    io::write_atomically(destination, [&](std::ostream& out) { export_regime_csv(map, out); });
}

}  // namespace hybrid
