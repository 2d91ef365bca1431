#include "qcr/density.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qcr/parallel.hpp"

namespace qcr {

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double h_scale) {
    std::vector<double> pt(x.begin(), x.end());
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = h_scale * (1.0 + std::abs(x[i]));
        const double xi = pt[i];
        pt[i] = xi + h;
        const double fp = f(pt);
        pt[i] = xi - h;
        const double fm = f(pt);
        pt[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Density Density::analytic(int dim, EvalFn eval, GradFn grad, quad::Box box,
                          const QuadratureConfig& cfg, bool check_normalization) {
    if (box.dim() != dim) throw DimensionError("box dimension mismatch");
    Density d;
    d.dim_ = dim;
    d.eval_ = std::move(eval);
    d.grad_ = std::move(grad);
    d.box_ = std::move(box);
    if (check_normalization) d.verify_normalization(cfg);
    return d;
}

Density Density::radial(RadialProfile profile, NormSpec norm, const QuadratureConfig& cfg,
                        bool check_normalization) {
    Density d;
    d.dim_ = norm.dim();
    d.radial_ = std::move(profile);
    d.radial_norm_ = std::move(norm);
    // truncation box from the profile decay (or the support radius)
    double r_box = d.radial_->rmax;
    if (!std::isfinite(r_box)) {
        const double v0 = d.radial_->value(0.0);
        double r = d.radial_->scale;
        while (d.radial_->value(r) > cfg.trunc_density_ratio * v0 && r < 1e12) r *= 1.5;
        r_box = r;
    }
    // box in x needs the norm-ball of radius r_box: bound per axis by r_box / ||e_i||^{-1};
    // for the supported norms the unit ball fits in the cube of the ball radius
    // divided by the smallest axis norm.
    double axis_scale = 1.0;
    {
        std::vector<double> e(d.dim_, 0.0);
        double mn = infinity();
        for (int i = 0; i < d.dim_; ++i) {
            e[i] = 1.0;
            mn = std::min(mn, (*d.radial_norm_)(e));
            e[i] = 0.0;
        }
        axis_scale = 1.0 / mn;
    }
    d.box_ = quad::Box::cube(d.dim_, r_box * axis_scale);
    if (check_normalization) d.verify_normalization(cfg);
    return d;
}

Density Density::grid(std::vector<GridAxis> axes, std::vector<double> values, bool renormalize) {
    std::size_t total = 1;
    for (const auto& a : axes) {
        if (a.count < 2) throw DomainError("grid axis needs at least 2 points");
        if (!(a.max > a.min)) throw DomainError("grid axis needs max > min");
        total *= a.count;
    }
    if (values.size() != total) throw DimensionError("grid value count mismatch");
    for (double v : values)
        if (v < 0.0 || !std::isfinite(v)) throw DomainError("grid density values must be >= 0");

    Density d;
    d.dim_ = static_cast<int>(axes.size());
    d.axes_ = std::move(axes);
    d.values_ = std::move(values);
    d.box_.lo.resize(d.dim_);
    d.box_.hi.resize(d.dim_);
    for (int i = 0; i < d.dim_; ++i) {
        d.box_.lo[i] = d.axes_[i].min;
        d.box_.hi[i] = d.axes_[i].max;
    }
    double mass = par::sum(d.values_.size(),
                           [&](std::size_t i) { return d.grid_weight(i) * d.values_[i]; });
    if (renormalize) {
        for (double& v : d.values_) v /= mass;
    } else if (std::abs(mass - 1.0) > 1e-6) {
        throw DomainError("grid density does not integrate to 1 (mass = " +
                          std::to_string(mass) + ")");
    }
    return d;
}

void Density::verify_normalization(const QuadratureConfig& cfg) const {
    double mass, err;
    if (is_radial()) {
        const double n_omega =
            dim_ * radial_norm_->unit_ball_volume();
        auto f = [&](double r) {
            return radial_->value(r) * std::pow(r, dim_ - 1);
        };
        auto res = quad::integrate_radial(f, radial_->rmax, radial_->scale, cfg,
                                          radial_->boundary_singular);
        mass = n_omega * res.value;
        err = n_omega * res.error;
    } else {
        if (dim_ > 3) return;  // box quadrature reserved for n <= 3
        auto res = quad::integrate_nd(
            [&](std::span<const double> x) { return eval_(x); }, box_, cfg);
        mass = res.value;
        err = res.error;
    }
    if (std::abs(mass - 1.0) > std::max(1e-6, 10.0 * err))
        throw DomainError("density does not integrate to 1 (mass = " + std::to_string(mass) +
                          ")");
}

double Density::operator()(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw DimensionError("density eval dim mismatch");
    if (is_radial()) {
        const double r = (*radial_norm_)(x);
        if (std::isfinite(radial_->rmax) && r >= radial_->rmax) return 0.0;
        return radial_->value(r);
    }
    if (is_grid()) {
        // multilinear interpolation, zero outside the grid
        std::vector<std::size_t> i0(dim_);
        std::vector<double> frac(dim_);
        for (int a = 0; a < dim_; ++a) {
            const auto& ax = axes_[a];
            double t = (x[a] - ax.min) / ax.step();
            if (t < 0.0 || t > static_cast<double>(ax.count - 1)) return 0.0;
            double fl = std::floor(t);
            std::size_t i = static_cast<std::size_t>(fl);
            if (i >= ax.count - 1) {
                i = ax.count - 2;
                fl = static_cast<double>(i);
            }
            i0[a] = i;
            frac[a] = t - fl;
        }
        double out = 0.0;
        const std::size_t corners = std::size_t{1} << dim_;
        for (std::size_t c = 0; c < corners; ++c) {
            double cw = 1.0;
            std::size_t flat = 0;
            for (int a = 0; a < dim_; ++a) {
                const bool hi = (c >> a) & 1u;
                cw *= hi ? frac[a] : 1.0 - frac[a];
                flat = flat * axes_[a].count + (i0[a] + (hi ? 1 : 0));
            }
            out += cw * values_[flat];
        }
        return out;
    }
    return eval_(x);
}

std::vector<double> Density::gradient(std::span<const double> x) const {
    if (is_radial()) {
        const double r = (*radial_norm_)(x);
        std::vector<double> g(dim_, 0.0);
        if (r < 1e-300) return g;
        if (std::isfinite(radial_->rmax) && r >= radial_->rmax) return g;
        const double dv = radial_->deriv(r);
        if (dv == 0.0) return g;
        std::vector<double> ng = radial_norm_->gradient(x);
        for (int i = 0; i < dim_; ++i) g[i] = dv * ng[i];
        return g;
    }
    if (is_grid()) {
        // gradient at the nearest node via central differences
        std::vector<std::size_t> idx(dim_);
        std::size_t flat = 0;
        for (int a = 0; a < dim_; ++a) {
            double t = std::round((x[a] - axes_[a].min) / axes_[a].step());
            t = std::max(0.0, std::min(t, static_cast<double>(axes_[a].count - 1)));
            idx[a] = static_cast<std::size_t>(t);
            flat = flat * axes_[a].count + idx[a];
        }
        return grid_gradient(flat);
    }
    if (grad_) return grad_(x);
    return fd_gradient(eval_, x);
}

void Density::grid_coords(std::size_t flat, std::span<double> out) const {
    for (int a = dim_ - 1; a >= 0; --a) {
        const std::size_t c = axes_[a].count;
        out[a] = axes_[a].coord(flat % c);
        flat /= c;
    }
}

double Density::grid_weight(std::size_t flat) const {
    double w = 1.0;
    for (int a = dim_ - 1; a >= 0; --a) {
        const std::size_t c = axes_[a].count;
        const std::size_t i = flat % c;
        flat /= c;
        w *= axes_[a].step() * ((i == 0 || i == c - 1) ? 0.5 : 1.0);
    }
    return w;
}

std::vector<double> Density::grid_gradient(std::size_t flat) const {
    std::vector<double> g(dim_);
    std::vector<std::size_t> idx(dim_);
    std::size_t rem = flat;
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = rem % axes_[a].count;
        rem /= axes_[a].count;
    }
    std::size_t stride = 1;
    for (int a = dim_ - 1; a >= 0; --a) {
        const auto& ax = axes_[a];
        const double h = ax.step();
        const std::size_t i = idx[a];
        double d;
        if (i == 0)
            d = (values_[flat + stride] - values_[flat]) / h;
        else if (i == ax.count - 1)
            d = (values_[flat] - values_[flat - stride]) / h;
        else
            d = (values_[flat + stride] - values_[flat - stride]) / (2.0 * h);
        g[a] = d;
        stride *= ax.count;
    }
    return g;
}

namespace detail {

std::vector<GridAxis> read_grid_header(std::istream& in) {
    std::string key;
    int n;
    if (!(in >> key >> n) || key != "dims" || n <= 0)
        throw DomainError("grid file must start with 'dims <n>'");
    std::vector<GridAxis> axes(n);
    for (int i = 0; i < n; ++i) {
        std::size_t count;
        double mn, mx;
        if (!(in >> key >> mn >> mx >> count) || key != "axis")
            throw DomainError("grid file: expected 'axis <min> <max> <count>'");
        axes[i] = GridAxis{mn, mx, count};
    }
    return axes;
}

void write_grid_header(std::ostream& out, const std::vector<GridAxis>& axes) {
    out << "dims " << axes.size() << "\n";
    for (const auto& a : axes)
        out << "axis " << a.min << " " << a.max << " " << a.count << "\n";
}

}  // namespace detail

Density Density::load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open grid file: " + path);
    auto axes = detail::read_grid_header(in);
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.count;
    std::vector<double> values(total);
    for (double& v : values)
        if (!(in >> v)) throw DomainError("grid file truncated: " + path);
    return grid(std::move(axes), std::move(values));
}

void Density::save_grid(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write grid file: " + path);
    out.precision(17);
    if (is_grid()) {
        detail::write_grid_header(out, axes_);
        for (std::size_t i = 0; i < values_.size(); ++i)
            out << values_[i] << ((i + 1) % 8 == 0 ? "\n" : " ");
        out << "\n";
        return;
    }
    // sample non-grid densities onto a default grid
    std::vector<GridAxis> axes(dim_);
    for (int a = 0; a < dim_; ++a) axes[a] = GridAxis{box_.lo[a], box_.hi[a], 513};
    detail::write_grid_header(out, axes);
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.count;
    std::vector<double> pt(dim_);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t rem = i;
        for (int a = dim_ - 1; a >= 0; --a) {
            pt[a] = axes[a].coord(rem % axes[a].count);
            rem /= axes[a].count;
        }
        out << (*this)(pt) << ((i + 1) % 8 == 0 ? "\n" : " ");
    }
    out << "\n";
}

}  // namespace qcr
