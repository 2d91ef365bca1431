#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcr/common.hpp"
#include "qcr/deformed.hpp"
#include "qcr/density.hpp"
#include "qcr/norms.hpp"
#include "qcr/rng.hpp"

namespace qcr {

// Generalized q-Gaussian G_gamma(x) = exp_{2-q}(-gamma ||x||^alpha) / Z.
// Compact support of radius ((q-1) gamma)^{-1/alpha} for q > 1, power tail
// for q < 1.
struct QGaussianParams {
    double q = 1.0;
    double alpha = 2.0;
    double gamma = 1.0;
    int dim = 1;
    NormSpec norm = NormSpec::lp(2.0, 1);

    double r_max() const {
        return q > 1.0 ? std::pow((q - 1.0) * gamma, -1.0 / alpha) : infinity();
    }
    double scale() const { return std::pow(gamma, -1.0 / alpha); }
    // Z finite iff q > (n - alpha)/n
    bool admissible() const { return q > (dim - alpha) / dim; }

    std::string to_string() const;
    static QGaussianParams parse(const std::string& text);
};

// partition function Z(gamma) by radial quadrature
double qgauss_partition(const QGaussianParams& p, const QuadratureConfig& cfg = {},
                        double* rel_err = nullptr);

// the normalized density as a radial Density
Density qgauss_density(const QGaussianParams& p, const QuadratureConfig& cfg = {});

// Draws one point per call: radius by numeric inverse CDF of the radial
// marginal, direction by the cone measure on the Lp sphere (p finite).
class QGaussianSampler {
  public:
    QGaussianSampler(const QGaussianParams& p, const QuadratureConfig& cfg = {});
    std::vector<double> draw(rng::Stream& stream) const;
    double tail_mass_bound() const { return tail_mass_; }

  private:
    QGaussianParams params_;
    double lp_ = 2.0;
    double tail_mass_ = 0.0;
    std::vector<double> radius_, cum_;
};

// i.i.d. draws with counter-based per-chunk streams: bit-identical results
// for any thread count.
struct SampleResult {
    std::vector<std::vector<double>> points;
    double tail_mass_bound = 0.0;  // mass beyond the truncation radius (q <= 1)
};
SampleResult qgauss_sample(const QGaussianParams& p, std::size_t count, std::uint64_t seed,
                           const QuadratureConfig& cfg = {});

// moment m_alpha, information generating M_q, entropy power N_q and the
// generalized Fisher information phi_{beta,q}, all by radial quadrature.
// These anchor the right-hand sides of the entropic-moment inequalities.
struct BaselineMeasures {
    double m_alpha = 0.0;
    double m_q = 0.0;      // M_q[G]
    double n_q = 0.0;      // N_q[G]
    double phi = 0.0;      // phi_{beta,q}[G]
    double rel_err = 0.0;  // max relative error across the quadratures
};
BaselineMeasures qgauss_baselines(const QGaussianParams& p, double beta,
                                  const QuadratureConfig& cfg = {});

}  // namespace qcr
