#pragma once

#include <complex>
#include <random>
#include <string>
#include <vector>

#include "hybrid/config_io.hpp"
#include "hybrid/linalg.hpp"
#include "hybrid/model.hpp"

namespace testing {

inline hybrid::SystemConfig preset(const std::string& name) {
    return hybrid::load_config(hybrid::preset_directory() / name);
}

inline hybrid::ModeSpec static_mode(std::string name, double w, double alpha, double beta) {
    return {std::move(name), hybrid::StaticFrequency{w}, alpha, beta};
}

inline hybrid::ModeSpec magnon(std::string name = "M", double alpha = 2e-5, double beta = 1.8e-4) {
    return {std::move(name), hybrid::FieldLinearFrequency{0.714, 2.714}, alpha, beta};
}

inline hybrid::ComplexMatrix random_complex_symmetric(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    hybrid::ComplexMatrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            a(i, j) = a(j, i) = {u(rng), u(rng)};
        }
    }
    return a;
}

// Smallest max-distance over all pairings (n <= 8).
inline double multiset_distance(const hybrid::ComplexVector& x, const hybrid::ComplexVector& y) {
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(y.size()));
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Eigen::Index>(i);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0;
        for (Eigen::Index i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x(i) - y(perm[static_cast<std::size_t>(i)])));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace testing
