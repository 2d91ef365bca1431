#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace qcr {

constexpr double kPi = 3.14159265358979323846;

// Controls every deterministic numeric path: quadrature tolerances,
// truncation, fixed panel/chunk layout for parallel reductions, MC budget.
struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 48;
    long max_evals = 20'000'000;
    double trunc_density_ratio = 1e-14;  // domain ends where density < ratio * max
    int outer_panels = 16;               // fixed panel count for outer dims of n-D quadrature
    long mc_budget = 100'000;
    std::uint64_t seed = 1;
};

struct IntegralResult {
    double value = 0.0;
    double error = 0.0;  // absolute error estimate
    long evals = 0;
    bool converged = true;

    double rel_error() const {
        double scale = std::abs(value);
        return scale > 0 ? error / scale : error;
    }
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NondifferentiableError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AdmissibilityError : std::domain_error {
    using std::domain_error::domain_error;
};

struct SupportViolationError : std::domain_error {
    using std::domain_error::domain_error;
};

inline double infinity() { return std::numeric_limits<double>::infinity(); }

// Holder conjugate: 1/a + 1/conj(a) = 1, with 1 <-> inf.
inline double holder_conjugate(double a) {
    if (a == 1.0) return infinity();
    if (std::isinf(a)) return 1.0;
    return a / (a - 1.0);
}

}  // namespace qcr
