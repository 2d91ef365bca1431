#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qcr/common.hpp"
#include "qcr/density.hpp"
#include "qcr/norms.hpp"

namespace qcr {

// E[||x||^alpha] under g. alpha = inf gives the essential sup of ||x|| over
// the support (the beta = 1 limit of the location inequality chain).
double moment(const Density& g, double alpha, const NormSpec& norm,
              const QuadratureConfig& cfg = {}, double* rel_err = nullptr);

// phi_{beta,q}[g] = E[g^{beta(q-1)} ||grad ln g||_*^beta], evaluated through
// the rewritten integrand g^{beta(q-1)+1-beta} ||grad g||_*^beta.
double phi_fisher(const Density& g, double beta, double q, const NormSpec& norm,
                  const QuadratureConfig& cfg = {}, double* rel_err = nullptr);

// I_{beta,q}[g] = (q / M_q[g])^beta phi_{beta,q}[g]
double i_fisher_q(const Density& g, double beta, double q, const NormSpec& norm,
                  const QuadratureConfig& cfg = {}, double* rel_err = nullptr);

// A parametric family f(x; theta). Gradients in theta fall back to central
// finite differences when no analytic gradient is attached.
struct ParametricFamily {
    int x_dim = 1;
    int theta_dim = 1;
    std::string name;
    std::function<double(std::span<const double>, std::span<const double>)> eval;
    std::function<std::vector<double>(std::span<const double>, std::span<const double>)>
        grad_theta;                                        // optional
    std::function<Density(std::span<const double>)> at;    // density at fixed theta

    std::vector<double> gradient_theta(std::span<const double> x,
                                       std::span<const double> theta) const;

    // translation family f(x - theta) built from a base density
    static ParametricFamily location(const Density& base, std::string name = "location");
};

using Estimator = std::function<std::vector<double>(std::span<const double>)>;

// I_beta[f|g; theta] = integral of ||grad_theta f / g||_*^beta g dx.
// Throws SupportViolationError (with a witness point) when grad_theta f is
// not absolutely continuous with respect to g.
double parametric_fisher(const ParametricFamily& f, const ParametricFamily& g,
                         std::span<const double> theta, double beta,
                         const NormSpec& theta_norm, const QuadratureConfig& cfg = {},
                         double* rel_err = nullptr);

// B_f(theta) = E_f[thetahat(x) - theta]
std::vector<double> bias_field(const ParametricFamily& f, const Estimator& est,
                               std::span<const double> theta, const QuadratureConfig& cfg = {});

// divergence of the bias field by central differences with step
// h = 1e-4 (1 + ||theta||); the error estimate comes from step halving.
double bias_divergence(const ParametricFamily& f, const Estimator& est,
                       std::span<const double> theta, const QuadratureConfig& cfg = {},
                       double* err_est = nullptr);

}  // namespace qcr
