#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcr/common.hpp"
#include "qcr/qgaussian.hpp"
#include "qcr/report.hpp"

namespace qcr {

struct WaveAxis {
    double x0 = 0.0;  // coordinate of index 0; grids are centered: x0 = -(n/2) dx
    double dx = 1.0;
    std::size_t n = 0;
    double coord(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
};

// Complex amplitude on a uniform centered grid; |psi|^2 integrates to 1.
class WaveFunction {
  public:
    std::vector<WaveAxis> axes;
    std::vector<std::complex<double>> values;  // row-major

    int dim() const { return static_cast<int>(axes.size()); }
    std::size_t size() const { return values.size(); }
    void coords(std::size_t flat, std::span<double> out) const;
    double weight(std::size_t flat) const;  // trapezoid cell weight
    double l2_sq() const;                   // integral of |psi|^2
    void normalize();
    // |psi|^2 mass fraction in the outer 1/16 shell of the box
    double edge_mass_fraction() const;

    static WaveFunction gaussian(int n, double sigma, std::size_t points = 4096,
                                 double extent_sigmas = 16.0, double quad_phase = 0.0,
                                 double lin_phase = 0.0);
    // |psi|^2 equals the given q-Gaussian (Euclidean norm), constant phase
    static WaveFunction qgaussian_wave(const QGaussianParams& p, std::size_t points = 4096,
                                       double extent_factor = 16.0);
    static WaveFunction bump(double width, std::size_t points = 4096, double extent = 4.0);
    static WaveFunction two_lobe(double sep, double sigma, std::size_t points = 4096,
                                 double extent_sigmas = 16.0);
    static WaveFunction parse(const std::string& spec);  // gauss:sigma=1,... / grid:<file>
    static WaveFunction load_grid(const std::string& path);
    void save_grid(const std::string& path) const;
};

// Unitary transform with kernel e^{-2 pi i x.xi}; aliasing (edge mass beyond
// 1e-8 in either domain) raises DomainError.
WaveFunction fourier(const WaveFunction& psi);
WaveFunction inverse_fourier(const WaveFunction& psi);

// M_s[|psi|^2] = integral of |psi|^{2s}
double wave_info_generating(const WaveFunction& psi, double order);
// escort moment E_s[||x||_p^mexp] of |psi|^2
double wave_escort_moment(const WaveFunction& psi, double escort_order, double moment_exp,
                          double p_norm);

// The two general (alpha, beta) uncertainty relations with escort moments of
// |psi|^2 and |psi_hat|^2; 1 <= alpha <= 2.
std::pair<InequalityReport, InequalityReport> check_uncertainty_general(
    const WaveFunction& psi, double alpha, double q, const QuadratureConfig& cfg = {});

// Euclidean corollary: moment orders gamma_mom, theta_mom >= 2; the weak
// third form exists only for k > 2.
struct EuclideanUncertainty {
    InequalityReport first;
    InequalityReport second;
    std::optional<InequalityReport> weak;
    double k = 0.0;
    double lambda = 0.0;
};
EuclideanUncertainty check_uncertainty_euclidean(const WaveFunction& psi, double q,
                                                 double gamma_mom, double theta_mom,
                                                 const QuadratureConfig& cfg = {});

// E[|x|^2] E[|xi|^2] >= 1/(16 pi^2) for 1-D psi; moments about the mean by
// default (raw = true uses raw moments).
InequalityReport heisenberg_check(const WaveFunction& psi, bool centered = true);

}  // namespace qcr
