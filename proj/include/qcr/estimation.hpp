#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qcr/info_measures.hpp"
#include "qcr/report.hpp"
#include "qcr/rng.hpp"

namespace qcr {

// Monte Carlo scenario for the parametric Cramer-Rao bound. `family` is f
// (its gradient and bias enter the bound), `weight` is g (the moment side):
//   same        g = f
//   escort:<q>  the escort pair with index q (g = f^{1/q} escort)
//   <family>    any other family spec
// Family grammar: gauss-location:sigma=..,n=.. | qgauss-location:q=..,alpha=..,
// gamma=..,n=.. | beta-location:a=..,b=.. | uniform-location
// Estimators: identity | scale:<c> | shift:<b>
struct ScenarioSpec {
    std::string name = "scenario";
    std::string family = "gauss-location:sigma=1,n=1";
    std::string weight = "same";
    std::string estimator = "identity";
    std::vector<double> theta = {0.0};
    double alpha = 2.0;
    std::string norm;  // default lp:2
    long budget = 100'000;
    std::uint64_t seed = 1;
    std::map<std::string, std::vector<double>> grids;  // scan keys: q, alpha, theta0

    static ScenarioSpec parse(std::istream& in);
    static ScenarioSpec parse_file(const std::string& path);
};

struct ScenarioResult {
    InequalityReport report;
    double moment_side = 0.0;  // E_g[||est - theta||^alpha]^{1/alpha}
    double se_moment_side = 0.0;
    double bias_divergence = 0.0;
    double se_bias_divergence = 0.0;
    double z = 0.0;  // slack / SE; bound violations need z < -3
    long budget = 0;
    bool ok = true;
    std::string error;  // set when the row failed (e.g. inadmissible)
};

// MC moment side + quadrature Fisher side + common-random-number finite
// differences for the bias divergence. Chunked counter-based streams make the
// result bit-identical across thread counts.
ScenarioResult run_scenario(const ScenarioSpec& spec, const QuadratureConfig& cfg = {});

// Expands the grids (cartesian product, row-major in key order); per-row
// seeds derive from the tuple values, so identical tuples give identical
// rows. Row errors are recorded, not fatal.
std::vector<ScenarioResult> scan_scenarios(const ScenarioSpec& spec,
                                           const QuadratureConfig& cfg = {});

}  // namespace qcr
