#include "qcr/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "qcr/parallel.hpp"

namespace qcr::quad {

namespace {

// Gauss7/Kronrod15 nodes on [0,1] side, weights {gauss, kronrod}.
constexpr double kNodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
constexpr double kGaussW[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
constexpr double kKronrodW[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

struct Adaptive {
    const Fn1& f;
    const QuadratureConfig& cfg;
    long evals = 0;
    bool converged = true;
    double sum = 0.0;
    double err_sum = 0.0;

    IntegralResult panel(double a, double b) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        double y0 = f(c);
        double g = kGaussW[0] * y0;
        double k = kKronrodW[0] * y0;
        for (int i = 1; i < 8; ++i) {
            double d = h * kNodes[i];
            double y = f(c + d) + f(c - d);
            g += kGaussW[i] * y;
            k += kKronrodW[i] * y;
        }
        evals += 15;
        g *= h;
        k *= h;
        double diff = std::abs(g - k);
        double e = std::pow(200.0 * diff, 1.5);
        if (!(e < diff)) e = diff;
        return {k, std::max(e, 1e-300), 15, true};
    }

    void recurse(double a, double b, const IntegralResult& r, double tol, int depth) {
        if (r.error <= tol || depth >= cfg.max_depth || evals > cfg.max_evals) {
            if (r.error > tol && depth >= cfg.max_depth) converged = false;
            if (evals > cfg.max_evals) converged = false;
            sum += r.value;
            err_sum += r.error;
            return;
        }
        const double m = 0.5 * (a + b);
        IntegralResult left = panel(a, m);
        IntegralResult right = panel(m, b);
        recurse(a, m, left, 0.5 * tol, depth + 1);
        recurse(m, b, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

IntegralResult gk15(const Fn1& f, double a, double b) {
    QuadratureConfig cfg;
    Adaptive ad{f, cfg};
    return ad.panel(a, b);
}

IntegralResult integrate_1d(const Fn1& f, double a, double b, const QuadratureConfig& cfg) {
    if (!(b > a)) return {0.0, 0.0, 0, true};
    Adaptive ad{f, cfg};
    // Seed the magnitude estimate with one bisection so symmetric integrands
    // do not fool the relative tolerance.
    const double m = 0.5 * (a + b);
    IntegralResult left = ad.panel(a, m);
    IntegralResult right = ad.panel(m, b);
    const double est = std::abs(left.value) + std::abs(right.value);
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * est);
    ad.recurse(a, m, left, 0.5 * tol, 1);
    ad.recurse(m, b, right, 0.5 * tol, 1);
    return {ad.sum, ad.err_sum, ad.evals, ad.converged};
}

IntegralResult integrate_sqrt_upper(const Fn1& f, double a, double b, const QuadratureConfig& cfg) {
    const double umax = std::sqrt(b - a);
    Fn1 g = [&](double u) { return 2.0 * u * f(b - u * u); };
    return integrate_1d(g, 0.0, umax, cfg);
}

IntegralResult integrate_tail(const Fn1& f, double r0, const QuadratureConfig& cfg) {
    Fn1 g = [&](double u) {
        double r = r0 / u;
        double v = f(r);
        return v == 0.0 ? 0.0 : v * r0 / (u * u);
    };
    return integrate_1d(g, 0.0, 1.0, cfg);
}

IntegralResult integrate_radial(const Fn1& f, double rmax, double scale,
                                const QuadratureConfig& cfg, bool boundary_singular) {
    IntegralResult total;
    auto add = [&](const IntegralResult& r) {
        total.value += r.value;
        total.error += r.error;
        total.evals += r.evals;
        total.converged = total.converged && r.converged;
    };
    if (std::isfinite(rmax)) {
        if (boundary_singular) {
            add(integrate_1d(f, 0.0, 0.5 * rmax, cfg));
            add(integrate_sqrt_upper(f, 0.5 * rmax, rmax, cfg));
        } else {
            add(integrate_1d(f, 0.0, rmax, cfg));
        }
    } else {
        const double split = std::max(8.0 * scale, 1.0);
        add(integrate_1d(f, 0.0, split, cfg));
        add(integrate_tail(f, split, cfg));
    }
    return total;
}

namespace {

IntegralResult integrate_inner(const FnN& f, const Box& box, int level,
                               std::vector<double>& point, const QuadratureConfig& cfg) {
    const int dim = box.dim();
    if (level == dim - 1) {
        Fn1 g = [&](double x) {
            point[level] = x;
            return f(std::span<const double>(point.data(), dim));
        };
        return integrate_1d(g, box.lo[level], box.hi[level], cfg);
    }
    long evals = 0;
    bool conv = true;
    Fn1 g = [&](double x) {
        point[level] = x;
        IntegralResult r = integrate_inner(f, box, level + 1, point, cfg);
        evals += r.evals;
        conv = conv && r.converged;
        return r.value;
    };
    IntegralResult r = integrate_1d(g, box.lo[level], box.hi[level], cfg);
    r.evals = evals;
    r.converged = r.converged && conv;
    return r;
}

template <bool Parallel>
IntegralResult integrate_nd_impl(const FnN& f, const Box& box, const QuadratureConfig& cfg) {
    const int dim = box.dim();
    if (dim == 0) return {0.0, 0.0, 0, true};
    if (dim == 1) {
        std::vector<double> pt(1);
        return integrate_inner(f, box, 0, pt, cfg);
    }
    QuadratureConfig inner = cfg;
    inner.rel_tol = cfg.rel_tol * 0.3;
    inner.max_depth = std::min(cfg.max_depth, 20);

    const int panels = std::max(1, cfg.outer_panels);
    const double w = (box.hi[0] - box.lo[0]) / panels;
    std::vector<IntegralResult> part(panels);

    auto run_panel = [&](int p) {
        std::vector<double> point(dim);
        long evals = 0;
        bool conv = true;
        Fn1 g = [&](double x) {
            point[0] = x;
            IntegralResult r = integrate_inner(f, box, 1, point, inner);
            evals += r.evals;
            conv = conv && r.converged;
            return r.value;
        };
        IntegralResult r = integrate_1d(g, box.lo[0] + p * w, box.lo[0] + (p + 1) * w, inner);
        r.evals = evals;
        r.converged = r.converged && conv;
        part[p] = r;
    };

    if constexpr (Parallel) {
        par::for_each_index(static_cast<std::size_t>(panels),
                            [&](std::size_t p) { run_panel(static_cast<int>(p)); });
    } else {
        for (int p = 0; p < panels; ++p) run_panel(p);
    }

    IntegralResult total;
    std::vector<double> vals(panels), errs(panels);
    for (int p = 0; p < panels; ++p) {
        vals[p] = part[p].value;
        errs[p] = part[p].error;
        total.evals += part[p].evals;
        total.converged = total.converged && part[p].converged;
    }
    total.value = par::pairwise(std::move(vals));
    total.error = par::pairwise(std::move(errs));
    return total;
}

}  // namespace

IntegralResult integrate_nd(const FnN& f, const Box& box, const QuadratureConfig& cfg) {
    return integrate_nd_impl<true>(f, box, cfg);
}

IntegralResult integrate_nd_serial(const FnN& f, const Box& box, const QuadratureConfig& cfg) {
    return integrate_nd_impl<false>(f, box, cfg);
}

}  // namespace qcr::quad
