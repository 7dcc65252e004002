#include "hybrid/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "hybrid/errors.hpp"
#include "io_util.hpp"
#include "parallel.hpp"

namespace hybrid {

namespace {

std::string format_point(double h_dc, double omega) {
    std::ostringstream os;
    os.precision(10);
    os << "(h_dc=" << h_dc << " kOe, omega=" << omega << " GHz)";
    return os.str();
}

// Split complex arithmetic; std::complex multiplication goes through the
// Annex G NaN-recovery path and dominates the integration loop otherwise.
struct SplitMatrix {
    std::size_t n;
    std::vector<double> re, im;

    explicit SplitMatrix(const ComplexMatrix& m)
        : n(static_cast<std::size_t>(m.rows())), re(n * n), im(n * n) {
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                re[r * n + c] = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).real();
                im[r * n + c] = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).imag();
            }
        }
    }
};

}  // namespace

cdouble s21_at(const SystemConfig& config, double h_dc, double omega) {
    const ComplexVector b = port_vector(config);
    ComplexVector x;
    try {
        x = linalg::lu_solve<double>(response_matrix(config, h_dc, omega), b);
    } catch (const SingularMatrix& e) {
        throw SingularMatrix(std::string("response matrix singular at ") + format_point(h_dc, omega) + ": " +
                             e.what());
    }
    return (b.transpose() * x)(0);
}

SpectrumGrid sweep_spectrum(const SystemConfig& config, unsigned threads) {
    SpectrumGrid grid;
    grid.field_values = config.field_sweep.values();
    grid.freq_values = config.frequency_sweep.values();
    const auto rows = static_cast<Eigen::Index>(grid.field_values.size());
    const auto cols = static_cast<Eigen::Index>(grid.freq_values.size());
    grid.s21.resize(rows, cols);
    detail::parallel_for(static_cast<std::size_t>(rows), threads, [&](std::size_t i) {
        const auto r = static_cast<Eigen::Index>(i);
        for (Eigen::Index c = 0; c < cols; ++c) {
            grid.s21(r, c) = s21_at(config, grid.field_values[i], grid.freq_values[static_cast<std::size_t>(c)]);
        }
    });
    return grid;
}

cdouble s21_time_domain_oracle(const SystemConfig& config, double h_dc, double omega) {
    double min_damping = std::numeric_limits<double>::infinity();
    bool driven = false;
    for (const auto& m : config.modes) {
        const double damping = m.alpha + m.beta;
        if (!(damping > 0)) throw NonDecaying("mode '" + m.name + "' has non-positive total damping");
        min_damping = std::min(min_damping, damping);
        driven = driven || m.beta > 0;
    }
    if (!driven) return {0.0, 0.0};

    const ComplexMatrix h = effective_hamiltonian(config, h_dc);
    const auto ev = linalg::eigenvalues<double>(h);
    double slowest = min_damping;
    for (Eigen::Index k = 0; k < ev.values.size(); ++k) {
        const double rate = -ev.values(k).imag();
        if (!(rate > 0)) {
            std::ostringstream os;
            os << "eigenmode " << ev.values(k) << " does not decay at " << format_point(h_dc, omega);
            throw NonDecaying(os.str());
        }
        slowest = std::min(slowest, rate);
    }

    const auto n = h.rows();
    const double max_entry = h.cwiseAbs().maxCoeff();
    const double duration = 20.0 / slowest;
    const auto steps = static_cast<long long>(std::ceil(duration * max_entry / 0.01));
    const double dt = duration / static_cast<double>(steps);

    // One RK4 step of dX/dt = L X + f(t) is affine: X' = R X + e^{-i w t_n} q.
    const cdouble i(0.0, 1.0);
    const ComplexMatrix a = -i * dt * h;
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a3 = a2 * a;
    const ComplexMatrix a4 = a3 * a;
    const ComplexMatrix r = ComplexMatrix::Identity(n, n) + a + a2 / 2.0 + a3 / 6.0 + a4 / 24.0;

    ComplexVector k_drive(n);
    for (Eigen::Index l = 0; l < n; ++l) k_drive(l) = std::sqrt(config.modes[static_cast<std::size_t>(l)].beta);
    const auto drive = [&](double t) -> ComplexVector { return -i * std::exp(-i * omega * t) * k_drive; };
    const ComplexMatrix lmat = -i * h;
    const ComplexVector k1 = drive(0.0);
    const ComplexVector k2 = lmat * (0.5 * dt * k1) + drive(0.5 * dt);
    const ComplexVector k3 = lmat * (0.5 * dt * k2) + drive(0.5 * dt);
    const ComplexVector k4 = lmat * (dt * k3) + drive(dt);
    const ComplexVector q = dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const SplitMatrix rs(r);
    const auto nn = static_cast<std::size_t>(n);
    std::vector<double> xr(nn, 0.0), xi(nn, 0.0), yr(nn), yi(nn);
    std::vector<double> qr(nn), qi(nn);
    for (std::size_t l = 0; l < nn; ++l) {
        qr[l] = q(static_cast<Eigen::Index>(l)).real();
        qi[l] = q(static_cast<Eigen::Index>(l)).imag();
    }
    const double rot_re = std::cos(omega * dt);
    const double rot_im = -std::sin(omega * dt);
    double ph_re = 1.0, ph_im = 0.0;
    for (long long step = 0; step < steps; ++step) {
        if ((step & 1023) == 0) {
            const double phase = -omega * dt * static_cast<double>(step);
            ph_re = std::cos(phase);
            ph_im = std::sin(phase);
        }
        for (std::size_t row = 0; row < nn; ++row) {
            double acc_re = ph_re * qr[row] - ph_im * qi[row];
            double acc_im = ph_re * qi[row] + ph_im * qr[row];
            const double* rr = &rs.re[row * nn];
            const double* ri = &rs.im[row * nn];
            for (std::size_t c = 0; c < nn; ++c) {
                acc_re += rr[c] * xr[c] - ri[c] * xi[c];
                acc_im += rr[c] * xi[c] + ri[c] * xr[c];
            }
            yr[row] = acc_re;
            yi[row] = acc_im;
        }
        std::swap(xr, yr);
        std::swap(xi, yi);
        const double next_re = ph_re * rot_re - ph_im * rot_im;
        ph_im = ph_re * rot_im + ph_im * rot_re;
        ph_re = next_re;
    }

    // Demodulate: steady state is X_ss e^{-i w t}.
    const cdouble demod = std::exp(i * omega * (dt * static_cast<double>(steps)));
    cdouble sum(0.0, 0.0);
    for (std::size_t l = 0; l < nn; ++l) {
        sum += std::sqrt(config.modes[l].beta) * cdouble(xr[l], xi[l]) * demod;
    }
    return -2.0 * i * sum;
}

double transmission_db(cdouble s21) {
    return 20.0 * std::log10(std::max(std::abs(1.0 + s21), 1e-12));
}

void export_csv(const SpectrumGrid& grid, std::ostream& out) {
    out << "h_koe,f_ghz,re_s21,im_s21,abs_s21\n";
    for (std::size_t i = 0; i < grid.field_values.size(); ++i) {
        for (std::size_t j = 0; j < grid.freq_values.size(); ++j) {
            const cdouble s = grid.s21(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            out << io::format_sig9(grid.field_values[i]) << ',' << io::format_sig9(grid.freq_values[j]) << ','
                << io::format_sig9(s.real()) << ',' << io::format_sig9(s.imag()) << ','
                << io::format_sig9(std::abs(s)) << '\n';
        }
    }
}

void export_csv(const SpectrumGrid& grid, const std::filesystem::path& destination) {
    io::write_atomically(destination, [&](std::ostream& out) { export_csv(grid, out); });
}

SpectrumGrid parse_spectrum_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "h_koe,f_ghz,re_s21,im_s21,abs_s21") {
        throw IoError("spectrum CSV: missing or malformed header");
    }
    std::vector<double> hs, fs;
    std::vector<cdouble> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = io::split(line, ',');
        if (cells.size() != 5) throw IoError("spectrum CSV: expected 5 columns in '" + line + "'");
        hs.push_back(io::parse_double(cells[0]));
        fs.push_back(io::parse_double(cells[1]));
        values.emplace_back(io::parse_double(cells[2]), io::parse_double(cells[3]));
    }
    SpectrumGrid grid;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        if (grid.field_values.empty() || grid.field_values.back() != hs[k]) grid.field_values.push_back(hs[k]);
    }
    if (grid.field_values.empty()) throw IoError("spectrum CSV: no data rows");
    const std::size_t cols = values.size() / grid.field_values.size();
    if (cols * grid.field_values.size() != values.size()) throw IoError("spectrum CSV: ragged grid");
    grid.freq_values.assign(fs.begin(), fs.begin() + static_cast<std::ptrdiff_t>(cols));
    grid.s21.resize(static_cast<Eigen::Index>(grid.field_values.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < values.size(); ++k) {
        grid.s21(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) = values[k];
    }
    return grid;
}

void export_pgm(const SpectrumGrid& grid, std::ostream& out, double floor_db, double ceil_db) {
    if (!(floor_db < ceil_db)) throw std::invalid_argument("export_pgm: floor_db must be < ceil_db");
    const auto rows = grid.s21.rows();
    const auto cols = grid.s21.cols();
    out << "P5\n" << cols << ' ' << rows << "\n255\n";
    std::string pixels(static_cast<std::size_t>(rows * cols), '\0');
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            const double t = (transmission_db(grid.s21(r, c)) - floor_db) / (ceil_db - floor_db);
            const double level = std::clamp(std::round(t * 255.0), 0.0, 255.0);
            pixels[static_cast<std::size_t>(r * cols + c)] = static_cast<char>(static_cast<unsigned char>(level));
        }
    }
    out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
}

void export_pgm(const SpectrumGrid& grid, const std::filesystem::path& destination, double floor_db,
                double ceil_db) {
    if (!(floor_db < ceil_db)) throw std::invalid_argument("export_pgm: floor_db must be < ceil_db");
    io::write_atomically(destination, [&](std::ostream& out) { export_pgm(grid, out, floor_db, ceil_db); });
}

}  // namespace hybrid
