#pragma once

// Declarative description of an N-mode hybrid system coupled to a shared
// feedline, and the matrices derived from it.
//
// Units: frequencies, damping rates and couplings in GHz; bias field in kOe.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hybrid/linalg.hpp"

namespace hybrid {

using linalg::ComplexMatrix;
using linalg::ComplexVector;
using cdouble = std::complex<double>;

/// Field-independent resonance (e.g. a planar photon resonator).
struct StaticFrequency {
    double value_ghz = 0;
    bool operator==(const StaticFrequency&) const = default;
};

/// Resonance that tunes linearly with bias field (e.g. the FMR magnon mode).
struct FieldLinearFrequency {
    double slope_ghz_per_koe = 0;
    double intercept_ghz = 0;
    bool operator==(const FieldLinearFrequency&) const = default;
};

using FrequencyLaw = std::variant<StaticFrequency, FieldLinearFrequency>;

struct ModeSpec {
    std::string name;
    FrequencyLaw frequency;
    double alpha = 0;  ///< intrinsic damping
    double beta = 0;   ///< extrinsic (feedline) damping
    bool operator==(const ModeSpec&) const = default;
};

/// Complex coupling j + i*gamma between two distinct modes (unordered pair).
struct CouplingSpec {
    std::string a;
    std::string b;
    double j = 0;
    double gamma = 0;
    bool operator==(const CouplingSpec&) const = default;

    bool joins(std::string_view x, std::string_view y) const noexcept {
        return (a == x && b == y) || (a == y && b == x);
    }
};

/// Uniform sweep of `points` samples from start to stop inclusive.
struct Sweep {
    double start = 0;
    double stop = 0;
    std::size_t points = 2;
    bool operator==(const Sweep&) const = default;

    double step() const noexcept { return (stop - start) / static_cast<double>(points - 1); }
    double at(std::size_t i) const noexcept;
    std::vector<double> values() const;
};

inline constexpr std::size_t kDefaultFieldPoints = 301;
inline constexpr std::size_t kDefaultFrequencyPoints = 401;

struct SystemConfig {
    std::vector<ModeSpec> modes;
    std::vector<CouplingSpec> couplings;
    Sweep field_sweep{0.0, 3.0, kDefaultFieldPoints};
    Sweep frequency_sweep{2.5, 5.0, kDefaultFrequencyPoints};
    std::string description;

    bool operator==(const SystemConfig&) const = default;

    std::size_t size() const noexcept { return modes.size(); }

    /// Throws ConfigError (DuplicateMode, UnknownModeInCoupling, ...) on the
    /// first violated invariant.
    void validate() const;

    std::optional<std::size_t> find_mode(std::string_view name) const;
    std::size_t mode_index(std::string_view name) const;  ///< throws UnknownModeInCoupling

    const CouplingSpec* find_coupling(std::string_view a, std::string_view b) const;
    /// Returns the coupling for the pair, appending a zero one if absent.
    CouplingSpec& coupling(std::string_view a, std::string_view b);
};

double mode_frequency(const ModeSpec& mode, double h_dc);

/// Complex resonance including both damping channels: w(h) - i(alpha + beta).
cdouble dressed_frequency(const ModeSpec& mode, double h_dc);

/// N x N complex symmetric non-Hermitian coupling matrix.
///   H(l,l) = w_l(h) - i(alpha_l + beta_l)
///   H(l,m) = (J_lm + i Gamma_lm) - i sqrt(beta_l beta_m)
/// The bath-mediated term is present for every pair, coupled or not.
ComplexMatrix effective_hamiltonian(const SystemConfig& config, double h_dc);

/// Linear response matrix M = i(omega I - H).
ComplexMatrix response_matrix(const SystemConfig& config, double h_dc, double omega);

/// Feedline port vector B_l = sqrt(2) sqrt(beta_l).
ComplexVector port_vector(const SystemConfig& config);

}  // namespace hybrid
