#include "qcr/info_measures.hpp"

#include <cmath>
#include <sstream>

#include "qcr/parallel.hpp"

namespace qcr {

namespace {

std::string point_string(std::span<const double> x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

bool radial_fast_path(const Density& g, const NormSpec& norm) {
    return g.is_radial() && g.radial_norm()->same_as(norm);
}

double sup_norm_over_box(const quad::Box& box, const NormSpec& norm) {
    // convex norm attains its max over a box at a corner
    const int n = box.dim();
    double best = 0.0;
    std::vector<double> pt(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        for (int i = 0; i < n; ++i) pt[i] = ((mask >> i) & 1u) ? box.hi[i] : box.lo[i];
        best = std::max(best, norm(pt));
    }
    return best;
}

}  // namespace

double moment(const Density& g, double alpha, const NormSpec& norm,
              const QuadratureConfig& cfg, double* rel_err) {
    if (norm.dim() != g.dim()) throw DimensionError("moment: norm/density dim mismatch");
    if (std::isinf(alpha)) {
        // ess-sup of ||x|| over the support
        if (rel_err) *rel_err = 0.0;
        if (radial_fast_path(g, norm)) {
            const auto* p = g.radial_profile();
            return std::isfinite(p->rmax) ? p->rmax : sup_norm_over_box(g.box(), norm);
        }
        if (g.is_grid()) {
            double best = 0.0;
            std::vector<double> pt(g.dim());
            for (std::size_t i = 0; i < g.grid_size(); ++i) {
                if (g.values()[i] <= 0.0) continue;
                g.grid_coords(i, pt);
                best = std::max(best, norm(pt));
            }
            return best;
        }
        return sup_norm_over_box(g.box(), norm);
    }
    if (!(alpha > 0.0)) throw DomainError("moment order must be positive");

    IntegralResult res;
    if (radial_fast_path(g, norm)) {
        const auto* p = g.radial_profile();
        const double n_omega = g.dim() * norm.unit_ball_volume();
        auto f = [&](double r) {
            return p->value(r) * std::pow(r, alpha + g.dim() - 1.0);
        };
        res = quad::integrate_radial(f, p->rmax, p->scale, cfg, p->boundary_singular);
        res.value *= n_omega;
        res.error *= n_omega;
    } else if (g.is_grid()) {
        double v = par::sum(g.grid_size(), [&](std::size_t i) {
            std::vector<double> pt(g.dim());
            g.grid_coords(i, pt);
            return g.grid_weight(i) * std::pow(norm(pt), alpha) * g.values()[i];
        });
        res = {v, std::abs(v) * 1e-6, static_cast<long>(g.grid_size()), true};
    } else {
        if (g.dim() > 3)
            throw DomainError("moment by box quadrature limited to n <= 3");
        res = quad::integrate_nd(
            [&](std::span<const double> x) { return std::pow(norm(x), alpha) * g(x); },
            g.box(), cfg);
    }
    if (!res.converged || !std::isfinite(res.value))
        throw ConvergenceError("moment integral diverged (alpha too large for this tail?)");
    if (rel_err) *rel_err = res.rel_error();
    return res.value;
}

double phi_fisher(const Density& g, double beta, double q, const NormSpec& norm,
                  const QuadratureConfig& cfg, double* rel_err) {
    if (norm.dim() != g.dim()) throw DimensionError("phi_fisher: norm/density dim mismatch");
    const double expo = beta * (q - 1.0) + 1.0 - beta;  // power of g against ||grad g||^beta
    const NormSpec dual = norm.dual();

    auto combine = [&](double v, double grad_dual, std::span<const double> where) -> double {
        if (v < 1e-300) {
            if (expo > 0.0 || grad_dual < 1e-280) return 0.0;
            throw DomainError("phi_fisher integrand divergence near density zero at " +
                              point_string(where));
        }
        if (grad_dual <= 0.0) return 0.0;
        return std::exp(expo * std::log(v) + beta * std::log(grad_dual));
    };

    IntegralResult res;
    if (radial_fast_path(g, norm)) {
        const auto* p = g.radial_profile();
        const double n_omega = g.dim() * norm.unit_ball_volume();
        auto f = [&](double r) {
            const double v = p->value(r);
            const double dv = std::abs(p->deriv(r));
            if (v < 1e-300) return 0.0;  // tails of admissible profiles vanish
            if (dv <= 0.0) return 0.0;
            return std::exp(expo * std::log(v) + beta * std::log(dv)) *
                   std::pow(r, g.dim() - 1.0);
        };
        res = quad::integrate_radial(f, p->rmax, p->scale, cfg, p->boundary_singular);
        res.value *= n_omega;
        res.error *= n_omega;
    } else if (g.is_grid()) {
        double v = par::sum(g.grid_size(), [&](std::size_t i) {
            const double gi = g.values()[i];
            std::vector<double> gr = g.grid_gradient(i);
            std::vector<double> pt(g.dim());
            g.grid_coords(i, pt);
            return g.grid_weight(i) * combine(gi, dual(gr), pt);
        });
        double h2 = 0.0;
        for (const auto& a : g.axes()) h2 = std::max(h2, a.step());
        res = {v, std::abs(v) * h2, static_cast<long>(g.grid_size()), true};
    } else {
        if (g.dim() > 3)
            throw DomainError("phi_fisher by box quadrature limited to n <= 3");
        res = quad::integrate_nd(
            [&](std::span<const double> x) {
                const double v = g(x);
                if (v < 1e-300) return combine(v, 0.0, x);
                std::vector<double> gr = g.gradient(x);
                return combine(v, dual(gr), x);
            },
            g.box(), cfg);
    }
    if (!res.converged || !std::isfinite(res.value))
        throw ConvergenceError("phi_fisher integral did not converge");
    if (rel_err) *rel_err = res.rel_error();
    return res.value;
}

double i_fisher_q(const Density& g, double beta, double q, const NormSpec& norm,
                  const QuadratureConfig& cfg, double* rel_err) {
    double phi_err = 0.0, m_err = 0.0;
    const double phi = phi_fisher(g, beta, q, norm, cfg, &phi_err);
    const double mq = info_generating(g, q, cfg, &m_err);
    if (rel_err) *rel_err = phi_err + beta * m_err;
    return std::pow(q / mq, beta) * phi;
}

std::vector<double> ParametricFamily::gradient_theta(std::span<const double> x,
                                                     std::span<const double> theta) const {
    if (grad_theta) return grad_theta(x, theta);
    std::vector<double> th(theta.begin(), theta.end());
    std::vector<double> g(theta_dim);
    for (int i = 0; i < theta_dim; ++i) {
        const double h = 1e-6 * (1.0 + std::abs(th[i]));
        const double t0 = th[i];
        th[i] = t0 + h;
        const double fp = eval(x, th);
        th[i] = t0 - h;
        const double fm = eval(x, th);
        th[i] = t0;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

ParametricFamily ParametricFamily::location(const Density& base, std::string name) {
    ParametricFamily fam;
    fam.x_dim = base.dim();
    fam.theta_dim = base.dim();
    fam.name = std::move(name);
    const Density b = base;
    fam.eval = [b](std::span<const double> x, std::span<const double> theta) {
        std::vector<double> z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - theta[i];
        return b(z);
    };
    fam.grad_theta = [b](std::span<const double> x, std::span<const double> theta) {
        std::vector<double> z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - theta[i];
        std::vector<double> g = b.gradient(z);
        for (double& v : g) v = -v;
        return g;
    };
    fam.at = [b](std::span<const double> theta) {
        const std::vector<double> shift(theta.begin(), theta.end());
        quad::Box box = b.box();
        for (std::size_t i = 0; i < shift.size(); ++i) {
            box.lo[i] += shift[i];
            box.hi[i] += shift[i];
        }
        Density::GradFn grad;
        if (b.has_gradient_fn()) {
            grad = [b, shift](std::span<const double> x) {
                std::vector<double> z(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - shift[i];
                return b.gradient(z);
            };
        }
        return Density::analytic(
            b.dim(),
            [b, shift](std::span<const double> x) {
                std::vector<double> z(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - shift[i];
                return b(z);
            },
            std::move(grad), std::move(box), {}, /*check_normalization=*/false);
    };
    return fam;
}

namespace {

quad::Box merge_boxes(const quad::Box& a, const quad::Box& b) {
    quad::Box out = a;
    for (int i = 0; i < a.dim(); ++i) {
        out.lo[i] = std::min(a.lo[i], b.lo[i]);
        out.hi[i] = std::max(a.hi[i], b.hi[i]);
    }
    return out;
}

}  // namespace

double parametric_fisher(const ParametricFamily& f, const ParametricFamily& g,
                         std::span<const double> theta, double beta,
                         const NormSpec& theta_norm, const QuadratureConfig& cfg,
                         double* rel_err) {
    if (theta_norm.dim() != f.theta_dim)
        throw DimensionError("parametric_fisher: theta norm dim mismatch");
    const NormSpec dual = theta_norm.dual();
    const Density gf = g.at(theta);
    const Density ff = f.at(theta);
    const quad::Box box = merge_boxes(gf.box(), ff.box());
    if (gf.dim() > 3) throw DomainError("parametric_fisher limited to x dim <= 3");

    auto res = quad::integrate_nd(
        [&](std::span<const double> x) {
            const double gv = gf(x);
            std::vector<double> df = f.gradient_theta(x, theta);
            const double nd = dual(df);
            if (gv < 1e-300) {
                if (nd < 1e-250) return 0.0;
                throw SupportViolationError(
                    "grad_theta f not absolutely continuous w.r.t. g at " + point_string(x));
            }
            if (nd <= 0.0) return 0.0;
            return std::exp(beta * std::log(nd / gv)) * gv;
        },
        box, cfg);
    if (!res.converged || !std::isfinite(res.value))
        throw ConvergenceError("parametric Fisher integral did not converge");
    if (rel_err) *rel_err = res.rel_error();
    return res.value;
}

std::vector<double> bias_field(const ParametricFamily& f, const Estimator& est,
                               std::span<const double> theta, const QuadratureConfig& cfg) {
    const Density ff = f.at(theta);
    std::vector<double> bias(f.theta_dim);
    for (int c = 0; c < f.theta_dim; ++c) {
        auto res = quad::integrate_nd(
            [&](std::span<const double> x) {
                return (est(x)[c] - theta[c]) * ff(x);
            },
            ff.box(), cfg);
        bias[c] = res.value;
    }
    return bias;
}

namespace {

double bias_divergence_step(const ParametricFamily& f, const Estimator& est,
                            std::span<const double> theta, double h,
                            const QuadratureConfig& cfg) {
    std::vector<double> th(theta.begin(), theta.end());
    double div = 0.0;
    for (int i = 0; i < f.theta_dim; ++i) {
        const double t0 = th[i];
        th[i] = t0 + h;
        const double bp = bias_field(f, est, th, cfg)[i];
        th[i] = t0 - h;
        const double bm = bias_field(f, est, th, cfg)[i];
        th[i] = t0;
        div += (bp - bm) / (2.0 * h);
    }
    return div;
}

}  // namespace

double bias_divergence(const ParametricFamily& f, const Estimator& est,
                       std::span<const double> theta, const QuadratureConfig& cfg,
                       double* err_est) {
    double t2 = 0.0;
    for (double t : theta) t2 += t * t;
    const double h = 1e-4 * (1.0 + std::sqrt(t2));
    const double d1 = bias_divergence_step(f, est, theta, h, cfg);
    const double d2 = bias_divergence_step(f, est, theta, 0.5 * h, cfg);
    if (err_est) *err_est = std::abs(d2 - d1) / 3.0;
    return d2;
}

}  // namespace qcr
