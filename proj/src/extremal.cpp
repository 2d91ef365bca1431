#include <algorithm>
#include <cmath>
#include <vector>

#include "qcr/inequalities.hpp"

namespace qcr {

namespace {

// Monotone cubic (Fritsch-Carlson) interpolant of the log-profile s over
// fixed knots in t = r^alpha. Values beyond the last knot are zero density.
struct LogSpline {
    std::vector<double> t, s, slope;

    void build(const std::vector<double>& knots, const std::vector<double>& values) {
        t = knots;
        s = values;
        const std::size_t k = t.size();
        slope.assign(k, 0.0);
        std::vector<double> h(k - 1), delta(k - 1);
        for (std::size_t j = 0; j + 1 < k; ++j) {
            h[j] = t[j + 1] - t[j];
            delta[j] = (s[j + 1] - s[j]) / h[j];
        }
        for (std::size_t j = 1; j + 1 < k; ++j) {
            if (delta[j - 1] * delta[j] <= 0.0) {
                slope[j] = 0.0;
            } else {
                const double w1 = 2.0 * h[j] + h[j - 1];
                const double w2 = h[j] + 2.0 * h[j - 1];
                slope[j] = (w1 + w2) / (w1 / delta[j - 1] + w2 / delta[j]);
            }
        }
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (m * d0 <= 0.0) return 0.0;
            if (std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
            return m;
        };
        slope[0] = k > 2 ? end_slope(h[0], h[1], delta[0], delta[1]) : delta[0];
        slope[k - 1] =
            k > 2 ? end_slope(h[k - 2], h[k - 3], delta[k - 2], delta[k - 3]) : delta[k - 2];
    }

    void eval(double x, double& value, double& deriv) const {
        const std::size_t k = t.size();
        if (x <= t[0]) {
            value = s[0] + slope[0] * (x - t[0]);
            deriv = slope[0];
            return;
        }
        if (x >= t[k - 1]) {
            value = s[k - 1] + slope[k - 1] * (x - t[k - 1]);
            deriv = slope[k - 1];
            return;
        }
        std::size_t lo = std::upper_bound(t.begin(), t.end(), x) - t.begin() - 1;
        const double h = t[lo + 1] - t[lo];
        const double u = (x - t[lo]) / h;
        const double u2 = u * u;
        const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        const double h10 = u * (1.0 - u) * (1.0 - u);
        const double h01 = u2 * (3.0 - 2.0 * u);
        const double h11 = u2 * (u - 1.0);
        value = h00 * s[lo] + h * h10 * slope[lo] + h01 * s[lo + 1] + h * h11 * slope[lo + 1];
        deriv = 6.0 * (u2 - u) * (s[lo] - s[lo + 1]) / h +
                (3.0 * u2 - 4.0 * u + 1.0) * slope[lo] + (3.0 * u2 - 2.0 * u) * slope[lo + 1];
    }
};

struct Objective {
    double q, alpha, beta, lambda, target;
    int n;
    double n_omega;
    std::vector<double> knots;  // in t = r^alpha
    QuadratureConfig cfg;

    struct Eval {
        double f = 0.0;       // phi * (m/target)^{beta lambda / alpha}
        double m = 0.0;       // moment of the unscaled profile
        double z_full = 0.0;  // full partition constant including n omega / alpha
        LogSpline spline;
    };

    Eval evaluate(const std::vector<double>& u) const {
        Eval e;
        const std::size_t k = knots.size();
        std::vector<double> s(k, 0.0);
        for (std::size_t j = 1; j < k; ++j) s[j] = s[j - 1] - u[j - 1];
        e.spline.build(knots, s);
        const double tmax = knots.back();
        const double n_over_a = static_cast<double>(n) / alpha;
        const double bq = beta * (q - 1.0) + 1.0;

        auto sv = [&](double t) {
            double v, d;
            e.spline.eval(t, v, d);
            return std::pair<double, double>(v, d);
        };
        auto zi = quad::integrate_1d(
            [&](double t) {
                return std::exp(sv(t).first) * std::pow(t, n_over_a - 1.0);
            },
            0.0, tmax, cfg);
        auto mi = quad::integrate_1d(
            [&](double t) { return std::exp(sv(t).first) * std::pow(t, n_over_a); }, 0.0,
            tmax, cfg);
        auto pi = quad::integrate_1d(
            [&](double t) {
                auto [v, d] = sv(t);
                if (d == 0.0) return 0.0;
                return std::exp(bq * v) * std::pow(std::abs(d), beta) *
                       std::pow(t, n_over_a);
            },
            0.0, tmax, cfg);

        e.z_full = (n_omega / alpha) * zi.value;
        e.m = mi.value / zi.value;
        const double phi = n_omega * std::pow(alpha, beta - 1.0) * pi.value /
                           std::pow(e.z_full, bq);
        e.f = phi * std::pow(e.m / target, beta * lambda / alpha);
        return e;
    }

    double operator()(const std::vector<double>& u) const { return evaluate(u).f; }
};

std::vector<double> fd_grad(const Objective& obj, const std::vector<double>& u, double f0) {
    (void)f0;
    std::vector<double> g(u.size());
    std::vector<double> v = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double h = 1e-5 * (1.0 + std::abs(u[i]));
        const double x0 = v[i];
        v[i] = x0 + h;
        const double fp = obj(v);
        v[i] = std::max(0.0, x0 - h);
        const double fm = obj(v);
        const double width = (x0 + h) - v[i];
        v[i] = x0;
        g[i] = (fp - fm) / width;
    }
    return g;
}

// Projected BFGS with Armijo backtracking; the bound is u >= 0.
struct BfgsResult {
    std::vector<double> u;
    double f = 0.0;
    bool converged = false;
};

BfgsResult projected_bfgs(const Objective& obj, std::vector<double> u, int max_iters) {
    const std::size_t d = u.size();
    std::vector<double> hinv(d * d, 0.0);
    auto reset_h = [&] {
        std::fill(hinv.begin(), hinv.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) hinv[i * d + i] = 1.0;
    };
    reset_h();
    auto project = [](std::vector<double>& v) {
        for (double& x : v) x = std::max(0.0, x);
    };
    project(u);
    double f = obj(u);
    std::vector<double> g = fd_grad(obj, u, f);
    bool converged = false;

    for (int iter = 0; iter < max_iters; ++iter) {
        // projected gradient norm
        double pg = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double gi = (u[i] <= 0.0 && g[i] > 0.0) ? 0.0 : g[i];
            pg = std::max(pg, std::abs(gi));
        }
        if (pg < 1e-8 * std::max(1.0, std::abs(f))) {
            converged = true;
            break;
        }
        std::vector<double> dir(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) dir[i] -= hinv[i * d + j] * g[j];
        double dg = 0.0;
        for (std::size_t i = 0; i < d; ++i) dg += dir[i] * g[i];
        if (!(dg < 0.0)) {
            reset_h();
            for (std::size_t i = 0; i < d; ++i) dir[i] = -g[i];
        }

        double step = 1.0;
        std::vector<double> u_new(d);
        double f_new = f;
        bool ok = false;
        for (int ls = 0; ls < 40; ++ls) {
            for (std::size_t i = 0; i < d; ++i) u_new[i] = u[i] + step * dir[i];
            project(u_new);
            f_new = obj(u_new);
            double descent = 0.0;
            for (std::size_t i = 0; i < d; ++i) descent += g[i] * (u_new[i] - u[i]);
            if (f_new <= f + 1e-4 * descent && f_new < f) {
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) {
            converged = true;  // no further progress available at fd-gradient noise level
            break;
        }
        std::vector<double> g_new = fd_grad(obj, u_new, f_new);
        std::vector<double> sv(d), yv(d);
        double sy = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            sv[i] = u_new[i] - u[i];
            yv[i] = g_new[i] - g[i];
            sy += sv[i] * yv[i];
        }
        if (sy > 1e-12) {
            // BFGS inverse update
            std::vector<double> hy(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) hy[i] += hinv[i * d + j] * yv[j];
            double yhy = 0.0;
            for (std::size_t i = 0; i < d; ++i) yhy += yv[i] * hy[i];
            const double c1 = (sy + yhy) / (sy * sy);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    hinv[i * d + j] += c1 * sv[i] * sv[j] -
                                       (hy[i] * sv[j] + sv[i] * hy[j]) / sy;
                }
            }
        } else {
            reset_h();
        }
        u = std::move(u_new);
        g = std::move(g_new);
        f = f_new;
    }
    return {u, f, converged};
}

}  // namespace

ExtremalResult extremal_search(double q, double alpha, int n, const NormSpec& norm,
                               double target_moment, const QuadratureConfig& cfg, int knots,
                               int restarts, int max_iters) {
    if (!(target_moment > 0.0)) throw DomainError("target moment must be positive");
    QGaussianParams ref;
    ref.q = q;
    ref.alpha = alpha;
    ref.gamma = 1.0;
    ref.dim = n;
    ref.norm = norm;
    if (!ref.admissible()) throw AdmissibilityError("extremal_search: inadmissible (q, alpha, n)");
    const double beta = holder_conjugate(alpha);

    // moment-matched gamma: m_alpha[G_gamma] = m_alpha[G_1] / gamma
    const BaselineMeasures base1 = qgauss_baselines(ref, beta, cfg);
    const double gamma_star = base1.m_alpha / target_moment;
    QGaussianParams matched = ref;
    matched.gamma = gamma_star;
    const BaselineMeasures base_g = qgauss_baselines(matched, beta, cfg);

    // knot range: cover the matched profile down to ~1e-12 of its peak
    double t_end;
    if (q > 1.0) {
        t_end = 1.0 / ((q - 1.0) * gamma_star);
    } else {
        double r = matched.scale();
        while (exp_q(-gamma_star * std::pow(r, alpha), 2.0 - q) > 1e-12 && r < 1e8) r *= 1.2;
        t_end = std::pow(r, alpha);
    }

    Objective obj;
    obj.q = q;
    obj.alpha = alpha;
    obj.beta = beta;
    obj.lambda = n * (q - 1.0) + 1.0;
    obj.target = target_moment;
    obj.n = n;
    obj.n_omega = n * norm.unit_ball_volume();
    obj.cfg = cfg;
    obj.cfg.rel_tol = std::min(cfg.rel_tol, 1e-11);
    obj.knots.resize(knots);
    for (int j = 0; j < knots; ++j) {
        const double frac = static_cast<double>(j) / (knots - 1);
        obj.knots[j] = t_end * frac * frac;  // quadratic spacing, dense near 0
    }

    const double objective_at_g =
        base_g.phi * std::pow(base_g.m_alpha / target_moment, beta * obj.lambda / alpha);

    BfgsResult best;
    best.f = infinity();
    int used = 0;
    for (int r = 0; r < restarts; ++r) {
        const double factor = r == 0 ? 1.0 : (r == 1 ? 2.0 : 0.5);
        std::vector<double> u0(knots - 1);
        for (int j = 0; j + 1 < knots; ++j)
            u0[j] = factor * gamma_star * (obj.knots[j + 1] - obj.knots[j]);
        BfgsResult res = projected_bfgs(obj, std::move(u0), max_iters);
        ++used;
        if (res.f < best.f) best = std::move(res);
        if (best.converged && best.f <= objective_at_g + 1e-8) break;
    }

    // rescale the winner to hit the target moment exactly and wrap as Density
    Objective::Eval ev = obj.evaluate(best.u);
    const double c = std::pow(ev.m / target_moment, 1.0 / alpha);
    const double z = ev.z_full;
    const double cn = std::pow(c, n);
    auto spline = std::make_shared<LogSpline>(ev.spline);
    const double t_cut = obj.knots.back();
    const double a = alpha;
    Density::RadialProfile prof;
    prof.rmax = std::pow(t_cut, 1.0 / alpha) / c;
    prof.scale = matched.scale();
    prof.boundary_singular = false;
    prof.value = [spline, c, cn, z, a, t_cut](double r) {
        const double t = std::pow(c * r, a);
        if (t >= t_cut) return 0.0;
        double v, d;
        spline->eval(t, v, d);
        return cn * std::exp(v) / z;
    };
    prof.deriv = [spline, c, cn, z, a, t_cut](double r) {
        const double t = std::pow(c * r, a);
        if (t >= t_cut || r <= 0.0) return 0.0;
        double v, d;
        spline->eval(t, v, d);
        return cn * std::exp(v) / z * d * a * std::pow(c * r, a - 1.0) * c;
    };
    Density found = Density::radial(std::move(prof), norm, cfg, /*check_normalization=*/false);

    // L1 distance to the matched q-Gaussian
    const Density g_matched = qgauss_density(matched, cfg);
    const auto* pf = found.radial_profile();
    const auto* pg = g_matched.radial_profile();
    const double n_omega = n * norm.unit_ball_volume();
    const double rmax_l1 =
        std::isfinite(pg->rmax) ? std::max(pf->rmax, pg->rmax) : infinity();
    auto l1 = quad::integrate_radial(
        [&](double r) {
            const double a_v = r < pf->rmax ? pf->value(r) : 0.0;
            const double b_v =
                std::isfinite(pg->rmax) && r >= pg->rmax ? 0.0 : pg->value(r);
            return std::abs(a_v - b_v) * std::pow(r, n - 1.0);
        },
        rmax_l1, matched.scale(), cfg, false);

    ExtremalResult out{
        std::move(found), InequalityReport{}, n_omega * l1.value, best.f, objective_at_g,
        gamma_star, best.converged, used};
    out.report = check_q_location_cr(out.density, q, alpha, norm, cfg);
    out.report.meta["source"] = "extremal_search";
    out.report.params["objective"] = out.objective;
    out.report.params["objective_at_g"] = out.objective_at_g;
    out.report.params["l1_distance"] = out.l1_distance;
    return out;
}

}  // namespace qcr
