#pragma once

#include <map>
#include <string>
#include <vector>

namespace qcr {

// One checked inequality: lhs >= rhs expected, ratio = lhs/rhs.
struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double slack = 0.0;
    bool saturated = false;
    double numeric_error = 0.0;  // relative error estimate on the ratio
    std::map<std::string, double> params;
    std::map<std::string, std::string> meta;

    bool holds(double tol) const { return ratio >= 1.0 - std::max(tol, numeric_error); }
};

InequalityReport make_report(std::string name, double lhs, double rhs, double numeric_error,
                             double saturation_tol = 1e-4);

// JSON object (17 significant digits) / CSV row (12 significant digits).
std::string report_to_json(const InequalityReport& r, int indent = 2);
std::string report_csv_header();
std::string report_to_csv(const InequalityReport& r);

std::string format_double(double v, int digits);

}  // namespace qcr
