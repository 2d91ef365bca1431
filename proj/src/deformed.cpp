#include "qcr/deformed.hpp"

#include <cmath>

#include "qcr/parallel.hpp"

namespace qcr {

namespace {
constexpr double kQSwitch = 1e-8;
}

double exp_q(double x, double q) {
    const double e = 1.0 - q;
    if (std::abs(e) < kQSwitch) return std::exp(x);
    const double t = 1.0 + e * x;
    if (t <= 0.0) return 0.0;
    return std::exp(std::log1p(e * x) / e);
}

double ln_q(double x, double q) {
    if (!(x > 0.0)) throw DomainError("ln_q requires x > 0");
    const double e = 1.0 - q;
    if (std::abs(e) < kQSwitch) return std::log(x);
    return std::expm1(e * std::log(x)) / e;
}

double exp_q_deriv(double x, double q) {
    const double e = 1.0 - q;
    if (std::abs(e) < kQSwitch) return std::exp(x);
    const double t = 1.0 + e * x;
    if (t <= 0.0) return 0.0;
    return std::exp(std::log1p(e * x) * (1.0 - e) / e);
}

IntegralResult density_pointwise_integral(const Density& g,
                                          const std::function<double(double)>& fn,
                                          const QuadratureConfig& cfg) {
    if (g.is_radial()) {
        const auto* prof = g.radial_profile();
        const int n = g.dim();
        const double n_omega = n * g.radial_norm()->unit_ball_volume();
        auto f = [&](double r) { return fn(prof->value(r)) * std::pow(r, n - 1); };
        auto res = quad::integrate_radial(f, prof->rmax, prof->scale, cfg,
                                          prof->boundary_singular);
        res.value *= n_omega;
        res.error *= n_omega;
        return res;
    }
    if (g.is_grid()) {
        double v = par::sum(g.grid_size(),
                            [&](std::size_t i) { return g.grid_weight(i) * fn(g.values()[i]); });
        // trapezoid error is grid-resolution limited; report h^2 heuristic
        double h2 = 0.0;
        for (const auto& a : g.axes()) h2 = std::max(h2, a.step() * a.step());
        return {v, std::abs(v) * h2, static_cast<long>(g.grid_size()), true};
    }
    if (g.dim() > 3)
        throw DomainError("box quadrature limited to n <= 3 (use radial densities beyond)");
    return quad::integrate_nd(
        [&](std::span<const double> x) { return fn(g(x)); }, g.box(), cfg);
}

double info_generating(const Density& g, double q, const QuadratureConfig& cfg,
                       double* rel_err) {
    auto res = density_pointwise_integral(
        g, [&](double v) { return v > 0.0 ? std::pow(v, q) : 0.0; }, cfg);
    if (!res.converged)
        throw ConvergenceError("M_q quadrature did not converge");
    if (!std::isfinite(res.value) || res.value > 1e300)
        throw ConvergenceError("M_q diverged");
    if (rel_err) *rel_err = res.rel_error();
    return res.value;
}

double entropy_power(const Density& g, double q, const QuadratureConfig& cfg, double* rel_err) {
    if (std::abs(q - 1.0) < kQSwitch) {
        // q -> 1 limit: exp of the Shannon differential entropy
        auto res = density_pointwise_integral(
            g, [&](double v) { return v > 0.0 ? -v * std::log(v) : 0.0; }, cfg);
        if (rel_err) *rel_err = res.error;
        return std::exp(res.value);
    }
    double merr = 0.0;
    const double m = info_generating(g, q, cfg, &merr);
    if (!(m > 0.0)) throw DomainError("entropy power requires M_q > 0");
    const double expo = 1.0 / (1.0 - q);
    if (rel_err) *rel_err = std::abs(expo) * merr;
    return std::pow(m, expo);
}

Density escort(const Density& g, double order, const QuadratureConfig& cfg) {
    double merr = 0.0;
    const double m = info_generating(g, order, cfg, &merr);
    if (!(m > 0.0) || !std::isfinite(m))
        throw ConvergenceError("escort normalization diverged");

    if (g.is_radial()) {
        const auto prof = *g.radial_profile();
        Density::RadialProfile p;
        p.rmax = prof.rmax;
        p.scale = prof.scale;
        p.boundary_singular = prof.boundary_singular;
        p.value = [prof, order, m](double r) {
            const double v = prof.value(r);
            return v > 0.0 ? std::pow(v, order) / m : 0.0;
        };
        p.deriv = [prof, order, m](double r) {
            const double v = prof.value(r);
            if (v <= 0.0) return 0.0;
            return order * std::pow(v, order - 1.0) * prof.deriv(r) / m;
        };
        return Density::radial(std::move(p), *g.radial_norm(), cfg, false);
    }
    if (g.is_grid()) {
        std::vector<double> vals(g.grid_size());
        par::for_each_index(g.grid_size(), [&](std::size_t i) {
            const double v = g.values()[i];
            vals[i] = v > 0.0 ? std::pow(v, order) : 0.0;
        });
        return Density::grid(g.axes(), std::move(vals), /*renormalize=*/true);
    }
    const Density base = g;  // copy for capture
    Density::EvalFn eval = [base, order, m](std::span<const double> x) {
        const double v = base(x);
        return v > 0.0 ? std::pow(v, order) / m : 0.0;
    };
    Density::GradFn grad;
    if (base.has_gradient_fn()) {
        grad = [base, order, m](std::span<const double> x) {
            const double v = base(x);
            std::vector<double> gr = base.gradient(x);
            const double f = v > 0.0 ? order * std::pow(v, order - 1.0) / m : 0.0;
            for (double& c : gr) c *= f;
            return gr;
        };
    }
    return Density::analytic(g.dim(), std::move(eval), std::move(grad), g.box(), cfg, false);
}

}  // namespace qcr
