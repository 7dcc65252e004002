#include "hybrid/model.hpp"

#include <cmath>
#include <set>
#include <utility>

#include "hybrid/errors.hpp"

namespace hybrid {

namespace {

bool finite(double x) { return std::isfinite(x); }

void validate_law(const ModeSpec& mode) {
    std::visit(
        [&](const auto& law) {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, StaticFrequency>) {
                if (!(law.value_ghz > 0) || !finite(law.value_ghz)) {
                    throw ConfigError("mode '" + mode.name + "': static frequency must be positive");
                }
            } else {
                if (!finite(law.slope_ghz_per_koe)) {
                    throw ConfigError("mode '" + mode.name + "': slope must be finite");
                }
                if (!(law.intercept_ghz >= 0) || !finite(law.intercept_ghz)) {
                    throw ConfigError("mode '" + mode.name + "': intercept must be >= 0");
                }
            }
        },
        mode.frequency);
}

void validate_sweep(const Sweep& s, const char* what) {
    if (!finite(s.start) || !finite(s.stop) || !(s.start < s.stop)) {
        throw ConfigError(std::string(what) + ": start must be < stop");
    }
    if (s.points < 2) throw ConfigError(std::string(what) + ": points must be >= 2");
}

}  // namespace

double Sweep::at(std::size_t i) const noexcept {
    if (i + 1 == points) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
}

std::vector<double> Sweep::values() const {
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) v[i] = at(i);
    return v;
}

void SystemConfig::validate() const {
    if (modes.empty()) throw ConfigError("at least one mode is required");
    std::set<std::string, std::less<>> names;
    for (const auto& m : modes) {
        if (m.name.empty()) throw ConfigError("mode name must not be empty");
        if (!names.insert(m.name).second) throw DuplicateMode(m.name);
        validate_law(m);
        if (!(m.alpha >= 0) || !finite(m.alpha)) throw ConfigError("mode '" + m.name + "': alpha must be >= 0");
        if (!(m.beta >= 0) || !finite(m.beta)) throw ConfigError("mode '" + m.name + "': beta must be >= 0");
    }
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& c : couplings) {
        if (!names.count(c.a)) throw UnknownModeInCoupling(c.a);
        if (!names.count(c.b)) throw UnknownModeInCoupling(c.b);
        if (c.a == c.b) throw ConfigError("coupling of mode '" + c.a + "' with itself");
        if (!finite(c.j) || !finite(c.gamma)) throw ConfigError("coupling " + c.a + "-" + c.b + " is not finite");
        auto key = c.a < c.b ? std::make_pair(c.a, c.b) : std::make_pair(c.b, c.a);
        if (!pairs.insert(std::move(key)).second) {
            throw ConfigError("coupling " + c.a + "-" + c.b + " listed more than once");
        }
    }
    validate_sweep(field_sweep, "field_sweep");
    validate_sweep(frequency_sweep, "frequency_sweep");
}

std::optional<std::size_t> SystemConfig::find_mode(std::string_view name) const {
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t SystemConfig::mode_index(std::string_view name) const {
    if (auto i = find_mode(name)) return *i;
    throw UnknownModeInCoupling(std::string(name));
}

const CouplingSpec* SystemConfig::find_coupling(std::string_view a, std::string_view b) const {
    for (const auto& c : couplings) {
        if (c.joins(a, b)) return &c;
    }
    return nullptr;
}

CouplingSpec& SystemConfig::coupling(std::string_view a, std::string_view b) {
    for (auto& c : couplings) {
        if (c.joins(a, b)) return c;
    }
    mode_index(a);
    mode_index(b);
    couplings.push_back(CouplingSpec{std::string(a), std::string(b), 0.0, 0.0});
    return couplings.back();
}

double mode_frequency(const ModeSpec& mode, double h_dc) {
    return std::visit(
        [h_dc](const auto& law) -> double {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, StaticFrequency>) {
                return law.value_ghz;
            } else {
                return law.slope_ghz_per_koe * h_dc + law.intercept_ghz;
            }
        },
        mode.frequency);
}

cdouble dressed_frequency(const ModeSpec& mode, double h_dc) {
    return {mode_frequency(mode, h_dc), -(mode.alpha + mode.beta)};
}

ComplexMatrix effective_hamiltonian(const SystemConfig& config, double h_dc) {
    const auto n = static_cast<Eigen::Index>(config.modes.size());
    ComplexMatrix h(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        const auto& ml = config.modes[static_cast<std::size_t>(l)];
        h(l, l) = dressed_frequency(ml, h_dc);
        for (Eigen::Index m = l + 1; m < n; ++m) {
            const auto& mm = config.modes[static_cast<std::size_t>(m)];
            const double bath = std::sqrt(ml.beta * mm.beta);
            double j = 0.0;
            double gamma = 0.0;
            if (const CouplingSpec* c = config.find_coupling(ml.name, mm.name)) {
                j = c->j;
                gamma = c->gamma;
            }
            const cdouble entry(j, gamma - bath);
            h(l, m) = entry;
            h(m, l) = entry;
        }
    }
    return h;
}

ComplexMatrix response_matrix(const SystemConfig& config, double h_dc, double omega) {
    const ComplexMatrix h = effective_hamiltonian(config, h_dc);
    const auto n = h.rows();
    const cdouble i(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const cdouble shifted = (r == c ? cdouble(omega, 0.0) : cdouble(0.0, 0.0)) - h(r, c);
            m(r, c) = i * shifted;
        }
    }
    return m;
}

ComplexVector port_vector(const SystemConfig& config) {
    ComplexVector b(static_cast<Eigen::Index>(config.modes.size()));
    const double root2 = std::sqrt(2.0);
    for (std::size_t l = 0; l < config.modes.size(); ++l) {
        b(static_cast<Eigen::Index>(l)) = cdouble(root2 * std::sqrt(config.modes[l].beta), 0.0);
    }
    return b;
}

}  // namespace hybrid
