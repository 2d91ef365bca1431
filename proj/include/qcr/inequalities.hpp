#pragma once

#include <functional>
#include <utility>

#include "qcr/deformed.hpp"
#include "qcr/density.hpp"
#include "qcr/info_measures.hpp"
#include "qcr/norms.hpp"
#include "qcr/qgaussian.hpp"
#include "qcr/report.hpp"

namespace qcr {

// Vector-valued functions of a scalar parameter for the Holder-type check.
using VectorFn = std::function<std::vector<double>(double)>;
using WeightFn = std::function<double(double)>;

// (int ||X||^a w)^{1/a} (int ||Y||_*^b w)^{1/b} >= int |X.Y| w >= |int X.Y w|
InequalityReport holder_check(const VectorFn& X, const VectorFn& Y, const WeightFn& w,
                              double t0, double t1, const NormSpec& norm, double alpha,
                              const QuadratureConfig& cfg = {});

// E_g[||est - theta||^a]^{1/a} I_b[f|g]^{1/b} >= |n + div B_f|
InequalityReport check_main_cr(const ParametricFamily& f, const ParametricFamily& g,
                               const Estimator& est, std::span<const double> theta,
                               double alpha, const NormSpec& norm,
                               const QuadratureConfig& cfg = {});

// escort family g^order / M_order(theta); normalizations by quadrature
ParametricFamily escort_family(const ParametricFamily& g, double order,
                               const QuadratureConfig& cfg = {});

// The two equivalent q-Cramer-Rao forms: the theorem applied to the escort
// pair (f, g) in both orders, f = escort_q(g). Plain-expectation moment with
// the escort bias, and escort-expectation moment with the plain bias.
std::pair<InequalityReport, InequalityReport> check_q_cr(
    const ParametricFamily& g, double q, const Estimator& est, std::span<const double> theta,
    double alpha, const NormSpec& norm, const QuadratureConfig& cfg = {});

// (int ||x||^a g)^{1/a} (int ||grad f / g||_*^b g)^{1/b} >= n; alpha may be
// inf (the beta = 1 chain).
InequalityReport check_location_cr(const Density& f, const Density& g, double alpha,
                                   const NormSpec& norm, const QuadratureConfig& cfg = {});

// (a-1) B(a-1, b) + (b-1) B(a, b-1) >= B(a, b) for a, b > 1
InequalityReport beta_function_inequality(double a, double b);

// m_alpha[g]^{1/a} I_{b,q}[g]^{1/b} >= n, with the escort-dual route
// recomputed and its gap reported.
InequalityReport check_q_location_cr(const Density& g, double q, double alpha,
                                     const NormSpec& norm, const QuadratureConfig& cfg = {});

// m_alpha[g]^{1/a} phi_{b,q}[g]^{1/(b lambda)} >= same at G, lambda = n(q-1)+1
InequalityReport check_lutwak_cr(const Density& g, double q, double alpha,
                                 const NormSpec& norm, const QuadratureConfig& cfg = {});

// m_alpha[g]^{1/a} / N_q[g]^{1/n} >= same at G
InequalityReport check_moment_entropy(const Density& g, double q, double alpha,
                                      const NormSpec& norm, const QuadratureConfig& cfg = {});

// phi_{b,q}[g]^{1/(b lambda)} N_q[g]^{1/n} >= same at G
InequalityReport check_stam(const Density& g, double q, double alpha, const NormSpec& norm,
                            const QuadratureConfig& cfg = {});

// Cached q-Gaussian anchor values at gamma = 1 (the right-hand sides above
// are scale invariant).
BaselineMeasures anchor_baselines(double q, double alpha, int n, const NormSpec& norm,
                                  double beta, const QuadratureConfig& cfg = {});

// Fisher-information minimization at fixed moment over monotone radial
// profiles (log-spline in t = r^alpha), projected BFGS with restarts.
struct ExtremalResult {
    Density density;
    InequalityReport report;       // q-location CR report of the found density
    double l1_distance = 0.0;      // L1 distance to the moment-matched G
    double objective = 0.0;        // scale-invariant phi m^{beta lambda / alpha} / target^...
    double objective_at_g = 0.0;
    double matched_gamma = 0.0;
    bool converged = false;
    int restarts_used = 0;
};
ExtremalResult extremal_search(double q, double alpha, int n, const NormSpec& norm,
                               double target_moment, const QuadratureConfig& cfg = {},
                               int knots = 20, int restarts = 3, int max_iters = 250);

}  // namespace qcr
