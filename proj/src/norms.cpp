#include "qcr/norms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qcr {

Matrix Matrix::identity(int n) {
    Matrix m;
    m.n = n;
    m.a.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m = identity(static_cast<int>(d.size()));
    for (int i = 0; i < m.n; ++i) m.at(i, i) = d[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix m;
    m.n = n;
    m.a.resize(a.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = at(j, i);
    return m;
}

Matrix Matrix::inverse() const {
    Matrix aug = *this;
    Matrix inv = identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(aug.at(r, col)) > std::abs(aug.at(piv, col))) piv = r;
        if (aug.at(piv, col) == 0.0) throw DomainError("singular matrix in norm map");
        if (piv != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(aug.at(piv, j), aug.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        }
        const double d = aug.at(col, col);
        for (int j = 0; j < n; ++j) {
            aug.at(col, j) /= d;
            inv.at(col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double m = aug.at(r, col);
            if (m == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                aug.at(r, j) -= m * aug.at(col, j);
                inv.at(r, j) -= m * inv.at(col, j);
            }
        }
    }
    return inv;
}

double Matrix::det() const {
    Matrix lu = *this;
    double d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(lu.at(r, col)) > std::abs(lu.at(piv, col))) piv = r;
        if (lu.at(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            d = -d;
            for (int j = 0; j < n; ++j) std::swap(lu.at(piv, j), lu.at(col, j));
        }
        d *= lu.at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double m = lu.at(r, col) / lu.at(col, col);
            for (int j = col; j < n; ++j) lu.at(r, j) -= m * lu.at(col, j);
        }
    }
    return d;
}

std::vector<double> Matrix::apply(std::span<const double> x) const {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

NormSpec NormSpec::lp(double p, int dim) {
    if (!(p >= 1.0)) throw DomainError("Lp norm requires p >= 1");
    NormSpec n;
    n.kind_ = Kind::Lp;
    n.dim_ = dim;
    n.p_ = p;
    return n;
}

NormSpec NormSpec::weighted_lp(double p, std::vector<double> weights) {
    if (!(p >= 1.0)) throw DomainError("weighted Lp norm requires p >= 1");
    for (double w : weights)
        if (!(w > 0.0)) throw DomainError("weighted Lp norm requires positive weights");
    NormSpec n;
    n.kind_ = Kind::WeightedLp;
    n.dim_ = static_cast<int>(weights.size());
    n.p_ = p;
    n.weights_ = std::move(weights);
    return n;
}

NormSpec NormSpec::linear_map(Matrix a, const NormSpec& inner) {
    if (a.n != inner.dim()) throw DimensionError("map size does not match inner norm dim");
    NormSpec n;
    n.kind_ = Kind::LinearMap;
    n.dim_ = a.n;
    n.map_inv_t_ = a.inverse().transpose();
    n.map_ = std::move(a);
    n.inner_.push_back(inner);
    return n;
}

void NormSpec::check_dim(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw DimensionError("vector dimension does not match norm dimension");
}

double NormSpec::operator()(std::span<const double> x) const {
    check_dim(x);
    switch (kind_) {
        case Kind::Lp: {
            if (std::isinf(p_)) {
                double m = 0.0;
                for (double v : x) m = std::max(m, std::abs(v));
                return m;
            }
            if (p_ == 1.0) {
                double s = 0.0;
                for (double v : x) s += std::abs(v);
                return s;
            }
            if (p_ == 2.0) {
                double s = 0.0;
                for (double v : x) s += v * v;
                return std::sqrt(s);
            }
            // rescale by the max to avoid overflow for large p
            double m = 0.0;
            for (double v : x) m = std::max(m, std::abs(v));
            if (m == 0.0) return 0.0;
            double s = 0.0;
            for (double v : x) s += std::pow(std::abs(v) / m, p_);
            return m * std::pow(s, 1.0 / p_);
        }
        case Kind::WeightedLp: {
            if (std::isinf(p_)) {
                double m = 0.0;
                for (int i = 0; i < dim_; ++i) m = std::max(m, weights_[i] * std::abs(x[i]));
                return m;
            }
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) s += weights_[i] * std::pow(std::abs(x[i]), p_);
            return std::pow(s, 1.0 / p_);
        }
        case Kind::LinearMap: {
            return inner_[0](map_->apply(x));
        }
    }
    return 0.0;
}

NormSpec NormSpec::dual() const {
    const double pd = holder_conjugate(p_);
    switch (kind_) {
        case Kind::Lp:
            return lp(pd, dim_);
        case Kind::WeightedLp: {
            std::vector<double> w(weights_.size());
            if (std::isinf(p_)) {
                // dual of max_i w_i |x_i| is sum |y_i| / w_i
                for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / weights_[i];
                return weighted_lp(1.0, std::move(w));
            }
            if (p_ == 1.0) {
                for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / weights_[i];
                return weighted_lp(infinity(), std::move(w));
            }
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(weights_[i], 1.0 - pd);
            return weighted_lp(pd, std::move(w));
        }
        case Kind::LinearMap:
            return linear_map(*map_inv_t_, inner_[0].dual());
    }
    throw DomainError("unreachable");
}

std::vector<double> NormSpec::gradient(std::span<const double> x) const {
    check_dim(x);
    const double nx = (*this)(x);
    if (nx == 0.0) throw NondifferentiableError("norm gradient undefined at 0");
    switch (kind_) {
        case Kind::Lp:
        case Kind::WeightedLp: {
            std::vector<double> g(dim_, 0.0);
            auto weight = [&](int i) {
                return kind_ == Kind::WeightedLp ? weights_[i] : 1.0;
            };
            if (std::isinf(p_)) {
                int arg = -1;
                double best = -1.0;
                bool tie = false;
                for (int i = 0; i < dim_; ++i) {
                    const double v = weight(i) * std::abs(x[i]);
                    if (v > best * (1.0 + 1e-12)) {
                        best = v;
                        arg = i;
                        tie = false;
                    } else if (v > best * (1.0 - 1e-12)) {
                        tie = true;
                    }
                }
                if (tie)
                    throw NondifferentiableError("max-norm gradient undefined at tied maximum");
                g[arg] = weight(arg) * (x[arg] > 0 ? 1.0 : -1.0);
                return g;
            }
            if (p_ == 1.0) {
                for (int i = 0; i < dim_; ++i) {
                    if (std::abs(x[i]) < 1e-12 * nx)
                        throw NondifferentiableError("L1 gradient undefined at zero coordinate");
                    g[i] = weight(i) * (x[i] > 0 ? 1.0 : -1.0);
                }
                return g;
            }
            for (int i = 0; i < dim_; ++i) {
                if (x[i] == 0.0) continue;
                g[i] = weight(i) * std::pow(std::abs(x[i]) / nx, p_ - 1.0) *
                       (x[i] > 0 ? 1.0 : -1.0);
            }
            return g;
        }
        case Kind::LinearMap: {
            std::vector<double> inner_grad = inner_[0].gradient(map_->apply(x));
            return map_->transpose().apply(inner_grad);
        }
    }
    throw DomainError("unreachable");
}

namespace {

double lgamma1p(double x) { return std::lgamma(1.0 + x); }

// Lebesgue volume of the unit Lp ball in R^n (Dirichlet integral).
double lp_ball_volume(double p, int n) {
    if (std::isinf(p)) return std::pow(2.0, n);
    return std::exp(n * (std::log(2.0) + lgamma1p(1.0 / p)) - lgamma1p(n / p));
}

}  // namespace

double NormSpec::unit_ball_volume() const {
    switch (kind_) {
        case Kind::Lp:
            return lp_ball_volume(p_, dim_);
        case Kind::WeightedLp: {
            double v = lp_ball_volume(p_, dim_);
            for (double w : weights_)
                v *= std::isinf(p_) ? 1.0 / w : std::pow(w, -1.0 / p_);
            return v;
        }
        case Kind::LinearMap:
            return inner_[0].unit_ball_volume() / std::abs(map_->det());
    }
    throw DomainError("unreachable");
}

bool NormSpec::dual_strictly_convex() const {
    const NormSpec* n = this;
    while (n->kind_ == Kind::LinearMap) n = &n->inner_[0];
    return n->p_ > 1.0 && !std::isinf(n->p_);
}

std::string NormSpec::to_string() const {
    std::ostringstream os;
    auto put_p = [&](double p) {
        if (std::isinf(p))
            os << "inf";
        else
            os << p;
    };
    switch (kind_) {
        case Kind::Lp:
            os << "lp:";
            put_p(p_);
            break;
        case Kind::WeightedLp:
            os << "wlp:";
            put_p(p_);
            os << ":";
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                if (i) os << ",";
                os << weights_[i];
            }
            break;
        case Kind::LinearMap: {
            os << "mat:[";
            for (int i = 0; i < dim_; ++i) {
                if (i) os << "; ";
                for (int j = 0; j < dim_; ++j) {
                    if (j) os << " ";
                    os << map_->at(i, j);
                }
            }
            os << "]:" << inner_[0].to_string();
            break;
        }
    }
    return os.str();
}

namespace {

double parse_exponent(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF") return infinity();
    return std::stod(s);
}

Matrix parse_matrix_body(const std::string& body) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(body);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::vector<double> r;
        std::stringstream rs(row);
        double v;
        while (rs >> v) r.push_back(v);
        if (!r.empty()) rows.push_back(std::move(r));
    }
    if (rows.empty()) throw DomainError("empty matrix in norm spec");
    Matrix m;
    m.n = static_cast<int>(rows.size());
    for (auto& r : rows) {
        if (static_cast<int>(r.size()) != m.n) throw DomainError("matrix in norm spec not square");
        for (double v : r) m.a.push_back(v);
    }
    return m;
}

Matrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open matrix file: " + path);
    int n;
    if (!(in >> n) || n <= 0) throw DomainError("matrix file must start with the dimension");
    Matrix m;
    m.n = n;
    m.a.resize(static_cast<std::size_t>(n) * n);
    for (double& v : m.a)
        if (!(in >> v)) throw DomainError("matrix file truncated: " + path);
    return m;
}

}  // namespace

NormSpec NormSpec::parse(const std::string& text, int dim_hint) {
    if (text.rfind("lp:", 0) == 0) {
        double p = parse_exponent(text.substr(3));
        if (dim_hint <= 0) throw DimensionError("lp norm needs a dimension hint");
        return lp(p, dim_hint);
    }
    if (text.rfind("wlp:", 0) == 0) {
        auto rest = text.substr(4);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw DomainError("wlp spec needs wlp:<p>:<weights>");
        double p = parse_exponent(rest.substr(0, colon));
        std::vector<double> w;
        std::stringstream ss(rest.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) w.push_back(std::stod(tok));
        return weighted_lp(p, std::move(w));
    }
    if (text.rfind("map:", 0) == 0) {
        auto rest = text.substr(4);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw DomainError("map spec needs map:<file>:<inner>");
        Matrix a = load_matrix_file(rest.substr(0, colon));
        NormSpec inner = parse(rest.substr(colon + 1), a.n);
        return linear_map(std::move(a), inner);
    }
    if (text.rfind("mat:[", 0) == 0) {
        auto close = text.find(']');
        if (close == std::string::npos) throw DomainError("mat spec missing ']'");
        Matrix a = parse_matrix_body(text.substr(5, close - 5));
        if (close + 1 >= text.size() || text[close + 1] != ':')
            throw DomainError("mat spec needs mat:[...]:<inner>");
        NormSpec inner = parse(text.substr(close + 2), a.n);
        return linear_map(std::move(a), inner);
    }
    throw DomainError("unknown norm spec: " + text);
}

bool NormSpec::same_as(const NormSpec& other, double tol) const {
    if (dim_ != other.dim_) return false;
    if (kind_ != other.kind_) return false;
    auto close = [&](double a, double b) {
        if (std::isinf(a) || std::isinf(b)) return std::isinf(a) && std::isinf(b);
        return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
    };
    if (!close(p_, other.p_)) return false;
    for (std::size_t i = 0; i < weights_.size(); ++i)
        if (!close(weights_[i], other.weights_[i])) return false;
    if (kind_ == Kind::LinearMap) {
        for (std::size_t i = 0; i < map_->a.size(); ++i)
            if (!close(map_->a[i], other.map_->a[i])) return false;
        return inner_[0].same_as(other.inner_[0], tol);
    }
    return true;
}

}  // namespace qcr
