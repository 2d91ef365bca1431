#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qcr/common.hpp"

namespace qcr::quad {

using Fn1 = std::function<double(double)>;
using FnN = std::function<double(std::span<const double>)>;

struct Box {
    std::vector<double> lo, hi;
    int dim() const { return static_cast<int>(lo.size()); }
    static Box cube(int n, double half_width) {
        Box b;
        b.lo.assign(n, -half_width);
        b.hi.assign(n, half_width);
        return b;
    }
};

// Single Gauss7/Kronrod15 panel; error = |G7 - K15|.
IntegralResult gk15(const Fn1& f, double a, double b);

// Adaptive bisection on [a, b]. Serial and deterministic.
IntegralResult integrate_1d(const Fn1& f, double a, double b, const QuadratureConfig& cfg);

// [a, b] with an algebraic singularity at b: u = sqrt(b - r) substitution.
IntegralResult integrate_sqrt_upper(const Fn1& f, double a, double b, const QuadratureConfig& cfg);

// [r0, inf) via u = r0 / r; handles power tails as endpoint singularities.
IntegralResult integrate_tail(const Fn1& f, double r0, const QuadratureConfig& cfg);

// Radial integral of f over [0, rmax] (rmax may be infinite). `scale` is a
// characteristic radius used to place the tail split; `boundary_singular`
// switches on the sqrt substitution near a finite rmax.
IntegralResult integrate_radial(const Fn1& f, double rmax, double scale,
                                const QuadratureConfig& cfg, bool boundary_singular = false);

// Iterated adaptive integration over a finite box. The outermost dimension is
// split into cfg.outer_panels fixed panels evaluated in parallel; the panel
// layout is independent of the thread count, so results are bit-identical
// across thread counts and match integrate_nd_serial exactly.
IntegralResult integrate_nd(const FnN& f, const Box& box, const QuadratureConfig& cfg);
IntegralResult integrate_nd_serial(const FnN& f, const Box& box, const QuadratureConfig& cfg);

}  // namespace qcr::quad
