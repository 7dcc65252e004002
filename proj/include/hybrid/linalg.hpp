#pragma once

// Small dense complex linear algebra: pivoted LU, a Hessenberg/shifted-QR
// eigensolver, and a characteristic-polynomial root finder used as an
// independent oracle for the eigensolver.
//
// Everything here is templated on the real scalar type; Eigen supplies
// storage and expression arithmetic only.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hybrid/errors.hpp"

namespace hybrid::linalg {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

using ComplexMatrix = CMatrix<double>;
using ComplexVector = CVector<double>;

/// Maximum absolute row sum. Zero for an empty matrix.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real inf_norm(const Eigen::MatrixBase<Derived>& a) {
    if (a.size() == 0) return 0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

enum class SingularPolicy { raise, perturb };

/// LU factorization with partial (row) pivoting.
///
/// With SingularPolicy::raise a pivot smaller than 1e-14 * ||a||_inf throws
/// SingularMatrix. With SingularPolicy::perturb such a pivot is replaced by
/// that threshold, which is what inverse iteration wants.
template <typename Real>
class PivotedLu {
public:
    explicit PivotedLu(CMatrix<Real> a, SingularPolicy policy = SingularPolicy::raise)
        : lu_(std::move(a)), perm_(static_cast<std::size_t>(lu_.rows())) {
        if (lu_.rows() != lu_.cols()) throw std::invalid_argument("PivotedLu: matrix is not square");
        const Eigen::Index n = lu_.rows();
        const Real norm = inf_norm(lu_);
        Real tol = Real(1e-14) * norm;
        if (tol == Real(0)) tol = std::numeric_limits<Real>::min();
        for (Eigen::Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;

        for (Eigen::Index k = 0; k < n; ++k) {
            Eigen::Index pivot_row = k;
            Real pivot_mag = std::abs(lu_(k, k));
            for (Eigen::Index r = k + 1; r < n; ++r) {
                const Real m = std::abs(lu_(r, k));
                if (m > pivot_mag) {
                    pivot_mag = m;
                    pivot_row = r;
                }
            }
            if (pivot_mag < tol) {
                if (policy == SingularPolicy::raise) {
                    throw SingularMatrix("pivot " + std::to_string(static_cast<double>(pivot_mag)) +
                                         " below threshold at column " + std::to_string(k));
                }
                lu_(pivot_row, k) = Complex<Real>(tol, 0);
            }
            if (pivot_row != k) {
                lu_.row(k).swap(lu_.row(pivot_row));
                std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(pivot_row)]);
            }
            const Complex<Real> pivot = lu_(k, k);
            for (Eigen::Index r = k + 1; r < n; ++r) {
                const Complex<Real> factor = lu_(r, k) / pivot;
                lu_(r, k) = factor;
                for (Eigen::Index c = k + 1; c < n; ++c) lu_(r, c) -= factor * lu_(k, c);
            }
        }
    }

    Eigen::Index size() const noexcept { return lu_.rows(); }

    CVector<Real> solve(const CVector<Real>& b) const {
        const Eigen::Index n = lu_.rows();
        if (b.size() != n) throw std::invalid_argument("PivotedLu::solve: size mismatch");
        CVector<Real> x(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex<Real> acc = b(perm_[static_cast<std::size_t>(i)]);
            for (Eigen::Index j = 0; j < i; ++j) acc -= lu_(i, j) * x(j);
            x(i) = acc;
        }
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            Complex<Real> acc = x(i);
            for (Eigen::Index j = i + 1; j < n; ++j) acc -= lu_(i, j) * x(j);
            x(i) = acc / lu_(i, i);
        }
        return x;
    }

private:
    CMatrix<Real> lu_;
    std::vector<Eigen::Index> perm_;
};

/// Solves a x = b. Throws SingularMatrix when a pivot falls below
/// 1e-14 * ||a||_inf.
template <typename Real>
CVector<Real> lu_solve(const CMatrix<Real>& a, const CVector<Real>& b) {
    if (a.rows() != a.cols()) throw std::invalid_argument("lu_solve: matrix is not square");
    if (b.size() != a.rows()) throw std::invalid_argument("lu_solve: right-hand side has wrong length");
    return PivotedLu<Real>(a).solve(b);
}

/// Householder reduction to upper Hessenberg form (similarity transform).
template <typename Real>
CMatrix<Real> hessenberg(CMatrix<Real> a) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index m = n - k - 1;
        CVector<Real> v = a.block(k + 1, k, m, 1);
        const Real alpha_mag = v.norm();
        if (alpha_mag == Real(0)) continue;
        const Complex<Real> x0 = v(0);
        const Complex<Real> phase = std::abs(x0) == Real(0) ? Complex<Real>(1) : x0 / std::abs(x0);
        v(0) += phase * alpha_mag;
        const Real vnorm = v.norm();
        if (vnorm == Real(0)) continue;
        v /= vnorm;
        // a <- (I - 2 v v^H) a (I - 2 v v^H)
        auto rows = a.block(k + 1, 0, m, n);
        const Eigen::Matrix<Complex<Real>, 1, Eigen::Dynamic> w = v.adjoint() * rows;
        rows -= Real(2) * v * w;
        auto cols = a.block(0, k + 1, n, m);
        const CVector<Real> u = cols * v;
        cols -= Real(2) * u * v.adjoint();
        for (Eigen::Index r = k + 2; r < n; ++r) a(r, k) = Complex<Real>(0);
    }
    return a;
}

template <typename Real>
struct EigenResult {
    CVector<Real> values;          ///< unordered, counted with multiplicity
    std::vector<Real> residuals;   ///< ||A v - lambda v|| per value; empty unless requested
    Real tolerance = 0;            ///< bound every residual satisfies
};

inline constexpr Eigen::Index kMaxEigenDimension = 16;
inline constexpr Eigen::Index kMaxPolynomialDimension = 8;

namespace detail {

template <typename Real>
Complex<Real> wilkinson_shift(const CMatrix<Real>& h, Eigen::Index hi) {
    const Complex<Real> a = h(hi - 1, hi - 1);
    const Complex<Real> b = h(hi - 1, hi);
    const Complex<Real> c = h(hi, hi - 1);
    const Complex<Real> d = h(hi, hi);
    const Complex<Real> half_tr = (a + d) / Real(2);
    const Complex<Real> half_diff = (a - d) / Real(2);
    const Complex<Real> disc = std::sqrt(half_diff * half_diff + b * c);
    const Complex<Real> mu1 = half_tr + disc;
    const Complex<Real> mu2 = half_tr - disc;
    return std::abs(mu1 - d) <= std::abs(mu2 - d) ? mu1 : mu2;
}

// One explicitly shifted QR step, restricted to the active block [lo, hi].
template <typename Real>
void shifted_qr_step(CMatrix<Real>& h, Eigen::Index lo, Eigen::Index hi, Complex<Real> mu) {
    for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) -= mu;
    std::vector<std::pair<Complex<Real>, Complex<Real>>> rotations;
    rotations.reserve(static_cast<std::size_t>(hi - lo));
    for (Eigen::Index k = lo; k < hi; ++k) {
        const Complex<Real> x = h(k, k);
        const Complex<Real> y = h(k + 1, k);
        const Real r = std::hypot(std::abs(x), std::abs(y));
        Complex<Real> c(1), s(0);
        if (r != Real(0)) {
            c = x / r;
            s = y / r;
        }
        for (Eigen::Index j = k; j <= hi; ++j) {
            const Complex<Real> top = h(k, j);
            const Complex<Real> bottom = h(k + 1, j);
            h(k, j) = std::conj(c) * top + std::conj(s) * bottom;
            h(k + 1, j) = -s * top + c * bottom;
        }
        rotations.emplace_back(c, s);
    }
    for (Eigen::Index k = lo; k < hi; ++k) {
        const auto [c, s] = rotations[static_cast<std::size_t>(k - lo)];
        const Eigen::Index last = std::min(k + 2, hi);
        for (Eigen::Index i = lo; i <= last; ++i) {
            const Complex<Real> left = h(i, k);
            const Complex<Real> right = h(i, k + 1);
            h(i, k) = c * left + s * right;
            h(i, k + 1) = -std::conj(s) * left + std::conj(c) * right;
        }
    }
    for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) += mu;
}

}  // namespace detail

/// Residual ||A v - lambda v||_2 with v from inverse iteration.
template <typename Real>
Real eigen_residual(const CMatrix<Real>& a, Complex<Real> lambda) {
    const Eigen::Index n = a.rows();
    CMatrix<Real> shifted = a;
    shifted.diagonal().array() -= lambda;
    const PivotedLu<Real> lu(shifted, SingularPolicy::perturb);
    CVector<Real> v = CVector<Real>::Constant(n, Complex<Real>(1) / std::sqrt(Real(n)));
    for (int it = 0; it < 3; ++it) {
        v = lu.solve(v);
        const Real nv = v.norm();
        if (!(nv > Real(0)) || !std::isfinite(nv)) break;
        v /= nv;
    }
    return (a * v - lambda * v).norm();
}

/// Eigenvalues of a small dense complex matrix.
///
/// Householder Hessenberg reduction followed by single-shift QR with
/// Wilkinson shifts and deflation. Throws NoConvergence after 100 * N^2
/// QR sweeps.
template <typename Real>
EigenResult<Real> eigenvalues(const CMatrix<Real>& a, bool with_residuals = false) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix is not square");
    const Eigen::Index n = a.rows();
    if (n > kMaxEigenDimension) throw std::invalid_argument("eigenvalues: dimension exceeds 16");

    EigenResult<Real> result;
    const Real norm = inf_norm(a);
    result.tolerance = Real(1e-9) * std::max(Real(1), norm);
    if (n == 0) {
        result.values.resize(0);
        return result;
    }

    CMatrix<Real> h = hessenberg<Real>(a);
    const Real eps = std::numeric_limits<Real>::epsilon();
    const long cap = 100L * n * n;
    long sweeps = 0;
    int since_deflation = 0;

    Eigen::Index hi = n - 1;
    while (hi > 0) {
        Eigen::Index lo = hi;
        for (; lo > 0; --lo) {
            Real scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (scale == Real(0)) scale = norm;
            if (std::abs(h(lo, lo - 1)) <= eps * scale) {
                h(lo, lo - 1) = Complex<Real>(0);
                break;
            }
        }
        if (lo == hi) {
            --hi;
            since_deflation = 0;
            continue;
        }
        if (++sweeps > cap) {
            throw NoConvergence("QR iteration exceeded " + std::to_string(cap) + " sweeps");
        }
        ++since_deflation;
        Complex<Real> mu;
        if (since_deflation % 11 == 0) {
            // exceptional shift to break cycles
            const Real bump = std::abs(h(hi, hi - 1)) + (hi >= 2 ? std::abs(h(hi - 1, hi - 2)) : Real(0));
            mu = h(hi, hi) + Complex<Real>(Real(0.75) * bump, Real(0.4375) * bump);
        } else {
            mu = detail::wilkinson_shift<Real>(h, hi);
        }
        detail::shifted_qr_step<Real>(h, lo, hi, mu);
    }

    result.values = h.diagonal();
    if (with_residuals) {
        result.residuals.reserve(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) result.residuals.push_back(eigen_residual<Real>(a, result.values(i)));
    }
    return result;
}

/// Coefficients c[0..n] of det(lambda I - a) = sum_k c[k] lambda^k (c[n] = 1),
/// by the Faddeev-LeVerrier recurrence.
template <typename Real>
std::vector<Complex<Real>> char_poly_coefficients(const CMatrix<Real>& a) {
    const Eigen::Index n = a.rows();
    std::vector<Complex<Real>> c(static_cast<std::size_t>(n + 1));
    c[static_cast<std::size_t>(n)] = Complex<Real>(1);
    CMatrix<Real> m = CMatrix<Real>::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m;
        m.diagonal().array() += c[static_cast<std::size_t>(n - k + 1)];
        const Complex<Real> tr = (a * m).trace();
        c[static_cast<std::size_t>(n - k)] = -tr / Real(k);
    }
    return c;
}

/// All roots of det(a - lambda I): Faddeev-LeVerrier coefficients, then
/// Durand-Kerner iteration until the largest update drops below 1e-12
/// (relative to max(1, |z|)). Throws NoConvergence after 10000 sweeps.
template <typename Real>
CVector<Real> char_poly_roots(const CMatrix<Real>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("char_poly_roots: matrix is not square");
    const Eigen::Index n = a.rows();
    if (n > kMaxPolynomialDimension) throw std::invalid_argument("char_poly_roots: dimension exceeds 8");
    CVector<Real> z(n);
    if (n == 0) return z;

    const std::vector<Complex<Real>> c = char_poly_coefficients<Real>(a);
    const auto eval = [&](Complex<Real> x) {
        Complex<Real> acc = c[static_cast<std::size_t>(n)];
        for (Eigen::Index k = n - 1; k >= 0; --k) acc = acc * x + c[static_cast<std::size_t>(k)];
        return acc;
    };

    // Roots of the polynomial shifted to its centroid are bounded by the
    // Fujiwara radius; start on a slightly rotated circle of that radius.
    const Complex<Real> center = -c[static_cast<std::size_t>(n - 1)] / Real(n);
    Real radius = 0;
    {
        std::vector<Complex<Real>> shifted = c;  // coefficients of p(x + center)
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = n - 1; k >= i; --k) {
                shifted[static_cast<std::size_t>(k)] += center * shifted[static_cast<std::size_t>(k + 1)];
            }
        }
        for (Eigen::Index k = 1; k <= n; ++k) {
            const Real mag = std::abs(shifted[static_cast<std::size_t>(n - k)]);
            radius = std::max(radius, std::pow(mag, Real(1) / Real(k)));
        }
        radius = std::max(Real(2) * radius, Real(1e-3));
    }
    const Real two_pi = Real(2) * std::acos(Real(-1));
    for (Eigen::Index i = 0; i < n; ++i) {
        z(i) = center + std::polar(radius, two_pi * Real(i) / Real(n) + Real(0.4));
    }

    constexpr int kMaxSweeps = 10000;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        Real max_update = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex<Real> denom(1);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j != i) denom *= z(i) - z(j);
            }
            if (denom == Complex<Real>(0)) denom = Complex<Real>(std::numeric_limits<Real>::epsilon());
            const Complex<Real> step = eval(z(i)) / denom;
            z(i) -= step;
            max_update = std::max(max_update, std::abs(step) / std::max(Real(1), std::abs(z(i))));
        }
        if (max_update < Real(1e-12)) return z;
    }
    throw NoConvergence("Durand-Kerner iteration exceeded 10000 sweeps");
}

}  // namespace hybrid::linalg
