#pragma once

#include "qcr/common.hpp"
#include "qcr/density.hpp"

namespace qcr {

// Deformation parameter with its derived indices and the admissibility
// predicate q > max{(n-1)/n, n/(n+alpha)} used by the entropic-moment and
// uncertainty checkers.
struct DeformationIndex {
    double q = 1.0;

    DeformationIndex() = default;
    /*implicit*/ DeformationIndex(double q_) : q(q_) {}

    double q_bar() const {
        if (!(q > 0.0)) throw DomainError("q_bar requires q > 0");
        return 1.0 / q;
    }
    double q_star() const { return 2.0 - q; }

    static double admissibility_threshold(int n, double alpha) {
        return std::max((n - 1.0) / n, n / (n + alpha));
    }
    bool admissible(int n, double alpha) const {
        return q > admissibility_threshold(n, alpha);
    }
};

// exp_q(x) = (1 + (1-q) x)_+^{1/(1-q)}, exp at q = 1. Continuous in q: the
// limit branch is taken for |1-q| < 1e-8.
double exp_q(double x, double q);

// ln_q(x) = (x^{1-q} - 1)/(1-q) for x > 0; inverse of exp_q where exp_q > 0.
double ln_q(double x, double q);

// derivative of exp_q: d/dx exp_q(x) = exp_q(x)^q (0 on the clamped region)
double exp_q_deriv(double x, double q);

// escort of order `order`: g^order / M_order[g]. The normalization is always
// recomputed by quadrature. Preserves the density flavor (radial stays
// radial, grid stays grid).
Density escort(const Density& g, double order, const QuadratureConfig& cfg = {});

// information generating function M_q[g] = integral of g^q
double info_generating(const Density& g, double q, const QuadratureConfig& cfg = {},
                       double* rel_err = nullptr);

// Renyi entropy power N_q[g] = M_q[g]^{1/(1-q)}; exp(Shannon entropy) at q=1.
double entropy_power(const Density& g, double q, const QuadratureConfig& cfg = {},
                     double* rel_err = nullptr);

// integral of fn(g(x)) over the domain of g, using the density's natural
// integration scheme (radial / grid / adaptive box).
IntegralResult density_pointwise_integral(const Density& g,
                                          const std::function<double(double)>& fn,
                                          const QuadratureConfig& cfg = {});

}  // namespace qcr
