#pragma once

// Feedline transmission S21 = P_out/P_in - 1 over (field, frequency) grids.

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "hybrid/model.hpp"

namespace hybrid {

struct SpectrumGrid {
    std::vector<double> field_values;  ///< kOe, ascending
    std::vector<double> freq_values;   ///< GHz, ascending
    ComplexMatrix s21;                 ///< field index x frequency index
};

/// S21 = B^T M^{-1} B, evaluated with a pivoted LU solve.
/// SingularMatrix is rethrown with the offending (h_dc, omega) in its message.
cdouble s21_at(const SystemConfig& config, double h_dc, double omega);

/// s21[i][j] = s21_at(config, field_i, freq_j). Bitwise independent of `threads`.
SpectrumGrid sweep_spectrum(const SystemConfig& config, unsigned threads = 1);

/// Independent steady-state route: integrates
///   dX/dt = -i H X - i K exp(-i omega t),  K_l = sqrt(beta_l),  X(0) = 0
/// with fixed-step RK4 (step <= 0.01 / max|H_lm|) for 20 decay times of the
/// slowest eigenmode (and at least 20 / min(alpha + beta)), demodulates the
/// final state and applies P_out = P_in - 2i sum sqrt(beta_l) X_l.
/// Throws NonDecaying if some alpha + beta <= 0 or H has an eigenvalue with
/// non-negative imaginary part (no steady state exists).
cdouble s21_time_domain_oracle(const SystemConfig& config, double h_dc, double omega);

/// 20 log10 |1 + S21|, floored at -240 dB.
double transmission_db(cdouble s21);

/// CSV: header `h_koe,f_ghz,re_s21,im_s21,abs_s21`, field-major rows,
/// 9 significant digits, LF line endings.
void export_csv(const SpectrumGrid& grid, std::ostream& out);
void export_csv(const SpectrumGrid& grid, const std::filesystem::path& destination);

/// Reads back a grid written by export_csv.
SpectrumGrid parse_spectrum_csv(std::istream& in);

/// Binary PGM (P5, maxval 255); width = frequency points, height = field
/// points (first row = first field value). Pixel value is transmission_db
/// mapped linearly from [floor_db, ceil_db] onto [0, 255] and clamped.
void export_pgm(const SpectrumGrid& grid, std::ostream& out, double floor_db, double ceil_db);
void export_pgm(const SpectrumGrid& grid, const std::filesystem::path& destination, double floor_db,
                double ceil_db);

}  // namespace hybrid
