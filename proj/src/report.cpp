#include "qcr/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace qcr {

InequalityReport make_report(std::string name, double lhs, double rhs, double numeric_error,
                             double saturation_tol) {
    InequalityReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = rhs != 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    r.slack = lhs - rhs;
    r.numeric_error = numeric_error;
    r.saturated = std::abs(r.ratio - 1.0) < std::max(saturation_tol, numeric_error);
    return r;
}

std::string format_double(double v, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

std::string report_to_json(const InequalityReport& r, int indent) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    // numbers emitted as strings-free doubles; nlohmann round-trips at 17 digits
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["ratio"] = r.ratio;
    j["slack"] = r.slack;
    j["saturated"] = r.saturated;
    j["numeric_error"] = r.numeric_error;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.params) p[k] = v;
    j["params"] = p;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.meta) m[k] = v;
    j["meta"] = m;
    return j.dump(indent);
}

std::string report_csv_header() {
    return "name,lhs,rhs,ratio,slack,saturated,numeric_error,params,error";
}

std::string report_to_csv(const InequalityReport& r) {
    std::ostringstream os;
    os << r.name << ",";
    os << format_double(r.lhs, 12) << "," << format_double(r.rhs, 12) << ","
       << format_double(r.ratio, 12) << "," << format_double(r.slack, 12) << ","
       << (r.saturated ? 1 : 0) << "," << format_double(r.numeric_error, 12) << ",";
    bool first = true;
    for (const auto& [k, v] : r.params) {
        if (!first) os << ";";
        os << k << "=" << format_double(v, 12);
        first = false;
    }
    for (const auto& [k, v] : r.meta) {
        if (k == "error") continue;
        if (!first) os << ";";
        os << k << "=" << v;
        first = false;
    }
    os << ",";
    auto it = r.meta.find("error");
    if (it != r.meta.end()) os << it->second;
    return os.str();
}

}  // namespace qcr
