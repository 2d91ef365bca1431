#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcr/common.hpp"
#include "qcr/norms.hpp"
#include "qcr/quadrature.hpp"

namespace qcr {

struct GridAxis {
    double min = 0.0, max = 1.0;
    std::size_t count = 2;
    double step() const { return (max - min) / static_cast<double>(count - 1); }
    double coord(std::size_t i) const { return min + step() * static_cast<double>(i); }
};

// A probability density on R^n. Three flavors share one interface:
//  - Analytic: eval fn + optional gradient fn on a finite truncation box.
//  - Radial: profile v(r), v'(r) in the radius of some norm; integrals reduce
//    to 1-D radial quadrature (exact tail handling, any dimension).
//  - Grid: uniform tensor grid of samples, trapezoid integration, central
//    difference gradients.
class Density {
  public:
    using EvalFn = std::function<double(std::span<const double>)>;
    using GradFn = std::function<std::vector<double>(std::span<const double>)>;

    struct RadialProfile {
        std::function<double(double)> value;
        std::function<double(double)> deriv;
        double rmax = 0.0;   // may be infinite
        double scale = 1.0;  // characteristic radius for tail splits
        bool boundary_singular = false;
    };

    Density() = default;  // empty density; assign before use

    static Density analytic(int dim, EvalFn eval, GradFn grad, quad::Box box,
                            const QuadratureConfig& cfg = {}, bool check_normalization = true);
    static Density radial(RadialProfile profile, NormSpec norm,
                          const QuadratureConfig& cfg = {}, bool check_normalization = true);
    static Density grid(std::vector<GridAxis> axes, std::vector<double> values,
                        bool renormalize = false);
    static Density load_grid(const std::string& path);
    void save_grid(const std::string& path) const;

    int dim() const { return dim_; }
    double operator()(std::span<const double> x) const;
    std::vector<double> gradient(std::span<const double> x) const;
    bool has_gradient_fn() const { return static_cast<bool>(grad_) || is_radial(); }

    bool is_grid() const { return !axes_.empty(); }
    bool is_radial() const { return radial_.has_value(); }
    const RadialProfile* radial_profile() const { return radial_ ? &*radial_ : nullptr; }
    const NormSpec* radial_norm() const { return radial_ ? &*radial_norm_ : nullptr; }

    const quad::Box& box() const { return box_; }

    const std::vector<GridAxis>& axes() const { return axes_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t grid_size() const { return values_.size(); }
    void grid_coords(std::size_t flat, std::span<double> out) const;
    // per-point trapezoid weight (product over axes)
    double grid_weight(std::size_t flat) const;
    std::vector<double> grid_gradient(std::size_t flat) const;

  private:
    void verify_normalization(const QuadratureConfig& cfg) const;

    int dim_ = 0;
    EvalFn eval_;
    GradFn grad_;
    quad::Box box_;
    std::optional<RadialProfile> radial_;
    std::optional<NormSpec> radial_norm_;
    std::vector<GridAxis> axes_;
    std::vector<double> values_;
};

// Finite-difference gradient used when no analytic gradient is available.
std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double h_scale = 1e-6);

namespace detail {
std::vector<GridAxis> read_grid_header(std::istream& in);
void write_grid_header(std::ostream& out, const std::vector<GridAxis>& axes);
}  // namespace detail

}  // namespace qcr
