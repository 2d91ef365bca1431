#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcr/common.hpp"

namespace qcr {

// Small dense matrix, row-major. Only needs inverse/transpose/determinant for
// the linear-map norms, dimensions stay tiny.
struct Matrix {
    int n = 0;
    std::vector<double> a;  // n*n row-major

    double& at(int i, int j) { return a[i * n + j]; }
    double at(int i, int j) const { return a[i * n + j]; }
    static Matrix identity(int n);
    static Matrix diagonal(std::span<const double> d);
    Matrix transpose() const;
    Matrix inverse() const;  // Gauss-Jordan with partial pivoting
    double det() const;
    std::vector<double> apply(std::span<const double> x) const;
    bool operator==(const Matrix&) const = default;
};

// Norms on R^n closed under duality: Lp, weighted Lp (sum w_i |x_i|^p)^{1/p}
// with the p = inf member defined as max_i w_i |x_i|, and ||Ax|| for an
// invertible A composed with either. Dual of a map norm is the map norm with
// A^{-T} around the dual of the inner norm.
class NormSpec {
  public:
    enum class Kind { Lp, WeightedLp, LinearMap };

    static NormSpec lp(double p, int dim);
    static NormSpec weighted_lp(double p, std::vector<double> weights);
    static NormSpec linear_map(Matrix a, const NormSpec& inner);

    int dim() const { return dim_; }
    Kind kind() const { return kind_; }
    double p() const { return p_; }
    const std::vector<double>& weights() const { return weights_; }

    double operator()(std::span<const double> x) const;
    double evaluate(std::span<const double> x) const { return (*this)(x); }

    NormSpec dual() const;
    std::vector<double> gradient(std::span<const double> x) const;
    double dual_of(std::span<const double> y) const { return dual()(y); }

    // Lebesgue volume of the unit ball.
    double unit_ball_volume() const;

    // true when the dual norm is strictly convex (inner exponent in (1, inf))
    bool dual_strictly_convex() const;

    std::string to_string() const;
    // Grammar: lp:<p>, wlp:<p>:<w1,...,wn>, map:<matrix file>:<inner>,
    // mat:[r00 r01; r10 r11]:<inner>. "inf" accepted as an exponent.
    static NormSpec parse(const std::string& text, int dim_hint = -1);

    bool same_as(const NormSpec& other, double tol = 1e-12) const;

  private:
    NormSpec() = default;
    void check_dim(std::span<const double> x) const;

    Kind kind_ = Kind::Lp;
    int dim_ = 0;
    double p_ = 2.0;                 // exponent of this level (Lp / WeightedLp)
    std::vector<double> weights_;    // WeightedLp
    std::optional<Matrix> map_;      // LinearMap
    std::optional<Matrix> map_inv_t_;
    std::vector<NormSpec> inner_;    // LinearMap inner norm (size 1)
};

}  // namespace qcr
