#include "qcr/uncertainty.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qcr/density.hpp"
#include "qcr/fft.hpp"
#include "qcr/inequalities.hpp"
#include "qcr/parallel.hpp"

namespace qcr {

namespace {
constexpr double kEdgeMassLimit = 1e-8;
}

void WaveFunction::coords(std::size_t flat, std::span<double> out) const {
    for (int d = dim() - 1; d >= 0; --d) {
        const std::size_t c = axes[d].n;
        out[d] = axes[d].coord(flat % c);
        flat /= c;
    }
}

double WaveFunction::weight(std::size_t flat) const {
    double w = 1.0;
    for (int d = dim() - 1; d >= 0; --d) {
        const std::size_t c = axes[d].n;
        const std::size_t i = flat % c;
        flat /= c;
        w *= axes[d].dx * ((i == 0 || i == c - 1) ? 0.5 : 1.0);
    }
    return w;
}

double WaveFunction::l2_sq() const {
    return par::sum(size(), [&](std::size_t i) { return weight(i) * std::norm(values[i]); });
}

void WaveFunction::normalize() {
    const double s = std::sqrt(l2_sq());
    if (!(s > 0.0)) throw DomainError("cannot normalize a zero wave function");
    for (auto& v : values) v /= s;
}

double WaveFunction::edge_mass_fraction() const {
    double edge = par::sum(size(), [&](std::size_t i) {
        std::size_t rem = i;
        bool is_edge = false;
        for (int d = dim() - 1; d >= 0; --d) {
            const std::size_t c = axes[d].n;
            const std::size_t idx = rem % c;
            rem /= c;
            if (idx < c / 16 || idx >= c - c / 16) is_edge = true;
        }
        return is_edge ? weight(i) * std::norm(values[i]) : 0.0;
    });
    return edge / l2_sq();
}

namespace {

WaveFunction make_centered(int n, std::size_t points, double half_width,
                           const std::function<std::complex<double>(std::span<const double>)>& f) {
    if (!fft::is_pow2(points)) throw DomainError("wave grids need power-of-two sizes");
    WaveFunction psi;
    psi.axes.assign(n, WaveAxis{});
    for (int d = 0; d < n; ++d) {
        const double dx = 2.0 * half_width / static_cast<double>(points);
        psi.axes[d] = WaveAxis{-0.5 * static_cast<double>(points) * dx, dx, points};
    }
    std::size_t total = 1;
    for (int d = 0; d < n; ++d) total *= points;
    psi.values.resize(total);
    par::for_each_index(total, [&](std::size_t i) {
        std::vector<double> x(n);
        psi.coords(i, x);
        psi.values[i] = f(x);
    });
    psi.normalize();
    return psi;
}

}  // namespace

WaveFunction WaveFunction::gaussian(int n, double sigma, std::size_t points,
                                    double extent_sigmas, double quad_phase,
                                    double lin_phase) {
    if (!(sigma > 0.0)) throw DomainError("gaussian wave needs sigma > 0");
    return make_centered(n, points, extent_sigmas * sigma, [&](std::span<const double> x) {
        double r2 = 0.0, xs = 0.0;
        for (double v : x) {
            r2 += v * v;
            xs += v;
        }
        const double mag = std::exp(-r2 / (4.0 * sigma * sigma));
        const double arg = quad_phase * r2 + lin_phase * xs;
        return std::complex<double>(mag * std::cos(arg), mag * std::sin(arg));
    });
}

WaveFunction WaveFunction::qgaussian_wave(const QGaussianParams& p, std::size_t points,
                                          double extent_factor) {
    const Density g = qgauss_density(p);
    double half = g.box().hi[0];
    if (extent_factor > 0.0)
        half = std::max(half, extent_factor * p.scale());
    if (std::isfinite(p.r_max())) half = std::min(half, 1.25 * p.r_max());
    return make_centered(p.dim, points, half, [&](std::span<const double> x) {
        return std::complex<double>(std::sqrt(g(x)), 0.0);
    });
}

WaveFunction WaveFunction::bump(double width, std::size_t points, double extent) {
    if (!(width > 0.0)) throw DomainError("bump wave needs width > 0");
    return make_centered(1, points, extent * width, [&](std::span<const double> x) {
        const double t = x[0] / width;
        if (std::abs(t) >= 1.0) return std::complex<double>(0.0, 0.0);
        return std::complex<double>(std::exp(-1.0 / (1.0 - t * t)), 0.0);
    });
}

WaveFunction WaveFunction::two_lobe(double sep, double sigma, std::size_t points,
                                    double extent_sigmas) {
    if (!(sigma > 0.0)) throw DomainError("two-lobe wave needs sigma > 0");
    const double half = extent_sigmas * sigma + sep;
    return make_centered(1, points, half, [&](std::span<const double> x) {
        const double a = x[0] - 0.5 * sep;
        const double b = x[0] + 0.5 * sep;
        const double mag = std::exp(-a * a / (4.0 * sigma * sigma)) +
                           std::exp(-b * b / (4.0 * sigma * sigma));
        return std::complex<double>(mag, 0.0);
    });
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& body) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw DomainError("bad wave parameter: " + tok);
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

double kv_num(const std::map<std::string, std::string>& kv, const std::string& k, double dflt) {
    auto it = kv.find(k);
    return it == kv.end() ? dflt : std::stod(it->second);
}

}  // namespace

WaveFunction WaveFunction::parse(const std::string& spec) {
    auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "grid") return load_grid(body);
    if (head == "gauss") {
        auto kv = parse_kv(body);
        return gaussian(static_cast<int>(kv_num(kv, "n", 1)), kv_num(kv, "sigma", 1.0),
                        static_cast<std::size_t>(kv_num(kv, "points", 4096)),
                        kv_num(kv, "extent", 16.0), kv_num(kv, "qphase", 0.0),
                        kv_num(kv, "lphase", 0.0));
    }
    if (head == "qgauss") {
        auto kv = parse_kv(body);
        QGaussianParams p;
        p.q = kv_num(kv, "q", 1.0);
        p.alpha = kv_num(kv, "alpha", 2.0);
        p.gamma = kv_num(kv, "gamma", 1.0);
        p.dim = static_cast<int>(kv_num(kv, "n", 1));
        p.norm = NormSpec::lp(2.0, p.dim);
        return qgaussian_wave(p, static_cast<std::size_t>(kv_num(kv, "points", 4096)),
                              kv_num(kv, "extent", 0.0));
    }
    if (head == "bump") {
        auto kv = parse_kv(body);
        return bump(kv_num(kv, "width", 1.0),
                    static_cast<std::size_t>(kv_num(kv, "points", 4096)),
                    kv_num(kv, "extent", 4.0));
    }
    if (head == "two-lobe") {
        auto kv = parse_kv(body);
        return two_lobe(kv_num(kv, "sep", 3.0), kv_num(kv, "sigma", 0.7),
                        static_cast<std::size_t>(kv_num(kv, "points", 4096)),
                        kv_num(kv, "extent", 16.0));
    }
    throw DomainError("unknown wave spec: " + spec);
}

WaveFunction WaveFunction::load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open wave grid file: " + path);
    auto axes = detail::read_grid_header(in);
    WaveFunction psi;
    std::size_t total = 1;
    for (const auto& a : axes) {
        const double dx = (a.max - a.min) / static_cast<double>(a.count - 1);
        psi.axes.push_back(WaveAxis{a.min, dx, a.count});
        total *= a.count;
        if (!fft::is_pow2(a.count)) throw DomainError("wave grids need power-of-two sizes");
        if (std::abs(a.min + 0.5 * static_cast<double>(a.count) * dx) > 1e-9 * (a.max - a.min))
            throw DomainError("wave grids must be centered (x0 = -(n/2) dx)");
    }
    psi.values.resize(total);
    for (auto& v : psi.values) {
        double re, im;
        if (!(in >> re >> im)) throw DomainError("wave grid file truncated: " + path);
        v = {re, im};
    }
    psi.normalize();
    return psi;
}

void WaveFunction::save_grid(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write wave grid file: " + path);
    out.precision(17);
    std::vector<GridAxis> gaxes;
    for (const auto& a : axes)
        gaxes.push_back(GridAxis{a.x0, a.coord(a.n - 1), a.n});
    detail::write_grid_header(out, gaxes);
    for (std::size_t i = 0; i < values.size(); ++i)
        out << values[i].real() << " " << values[i].imag()
            << ((i + 1) % 4 == 0 ? "\n" : " ");
    out << "\n";
}

namespace {

WaveFunction spectral_transform(const WaveFunction& in, int sign) {
    const int nd = in.dim();
    WaveFunction out;
    out.axes.resize(nd);
    std::vector<std::size_t> dims(nd);
    double cell = 1.0;
    for (int d = 0; d < nd; ++d) {
        const auto& ax = in.axes[d];
        if (!fft::is_pow2(ax.n)) throw DomainError("fourier requires power-of-two grids");
        dims[d] = ax.n;
        const double dxo = 1.0 / (static_cast<double>(ax.n) * ax.dx);
        out.axes[d] = WaveAxis{-0.5 * static_cast<double>(ax.n) * dxo, dxo, ax.n};
        cell *= ax.dx;
    }
    out.values = in.values;
    par::for_each_index(out.values.size(), [&](std::size_t i) {
        std::size_t rem = i;
        unsigned parity = 0;
        for (int d = nd - 1; d >= 0; --d) {
            parity ^= static_cast<unsigned>(rem % dims[d]) & 1u;
            rem /= dims[d];
        }
        if (parity) out.values[i] = -out.values[i];
    });
    fft::fft_nd(out.values, dims, sign);
    par::for_each_index(out.values.size(), [&](std::size_t i) {
        std::size_t rem = i;
        double dot = 0.0;
        for (int d = nd - 1; d >= 0; --d) {
            const std::size_t idx = rem % dims[d];
            rem /= dims[d];
            dot += in.axes[d].x0 * out.axes[d].coord(idx);
        }
        const double ang = sign * 2.0 * kPi * dot;
        out.values[i] *= cell * std::complex<double>(std::cos(ang), std::sin(ang));
    });
    return out;
}

void require_bandwidth(const WaveFunction& psi, const char* domain) {
    const double m = psi.edge_mass_fraction();
    if (m > kEdgeMassLimit) {
        std::ostringstream os;
        os << "aliasing: " << domain << "-domain edge mass " << m << " exceeds "
           << kEdgeMassLimit << " (enlarge the grid extent or resolution)";
        throw DomainError(os.str());
    }
}

}  // namespace

WaveFunction fourier(const WaveFunction& psi) {
    require_bandwidth(psi, "space");
    WaveFunction out = spectral_transform(psi, -1);
    require_bandwidth(out, "frequency");
    return out;
}

WaveFunction inverse_fourier(const WaveFunction& psi) {
    return spectral_transform(psi, +1);
}

double wave_info_generating(const WaveFunction& psi, double order) {
    return par::sum(psi.size(), [&](std::size_t i) {
        const double d = std::norm(psi.values[i]);
        return d > 0.0 ? psi.weight(i) * std::pow(d, order) : 0.0;
    });
}

double wave_escort_moment(const WaveFunction& psi, double escort_order, double moment_exp,
                          double p_norm) {
    const NormSpec norm = NormSpec::lp(p_norm, psi.dim());
    const double num = par::sum(psi.size(), [&](std::size_t i) {
        const double d = std::norm(psi.values[i]);
        if (d <= 0.0) return 0.0;
        std::vector<double> x(psi.dim());
        psi.coords(i, x);
        return psi.weight(i) * std::pow(norm(x), moment_exp) * std::pow(d, escort_order);
    });
    return num / wave_info_generating(psi, escort_order);
}

std::pair<InequalityReport, InequalityReport> check_uncertainty_general(
    const WaveFunction& psi, double alpha, double q, const QuadratureConfig& cfg) {
    if (!(alpha >= 1.0 && alpha <= 2.0))
        throw DomainError("uncertainty-general requires 1 <= alpha <= 2");
    const int n = psi.dim();
    const double beta = holder_conjugate(alpha);
    if (!(q > DeformationIndex::admissibility_threshold(n, alpha)))
        throw AdmissibilityError("uncertainty-general: q below the admissible range");
    const double kden = beta * (q - 1.0) + 1.0;
    if (!(kden > 0.0))
        throw AdmissibilityError("uncertainty-general: beta(q-1)+1 must be positive");
    const double k = beta / kden;
    const double lambda = n * (q - 1.0) + 1.0;

    const WaveFunction hat = fourier(psi);
    const double m_k2 = wave_info_generating(psi, 0.5 * k);
    const double m_kq2 = wave_info_generating(psi, 0.5 * k * q);
    const double m_a2 = wave_info_generating(hat, 0.5 * alpha);
    const double ex = wave_escort_moment(psi, 0.5 * k, alpha, alpha);
    const double exi = wave_escort_moment(hat, 0.5 * alpha, beta, beta);
    const double bb = std::pow(beta, 1.0 / beta) / std::pow(alpha, 1.0 / alpha);

    const double lhs1 = std::pow(m_a2, 1.0 / alpha) * std::pow(m_k2, 1.0 / alpha) / m_kq2 *
                        std::pow(ex, 1.0 / alpha) * std::pow(exi, 1.0 / beta);
    const double rhs1 = n / (2.0 * kPi * k * q) * std::pow(bb, -0.5 * n / beta);
    InequalityReport r1 = make_report("uncertainty-general-1", lhs1, rhs1, 1e-7);

    const BaselineMeasures gb =
        anchor_baselines(q, alpha, n, NormSpec::lp(alpha, n), beta, cfg);
    const double lhs2 = std::pow(m_a2, 1.0 / (alpha * lambda)) /
                        std::pow(m_k2, 1.0 / (k * lambda)) * std::pow(ex, 1.0 / alpha) *
                        std::pow(exi, 1.0 / (beta * lambda));
    const double rhs2 = std::pow(2.0 * kPi * k, -1.0 / lambda) *
                        std::pow(bb, -0.5 * n / (beta * lambda)) *
                        std::pow(gb.m_alpha, 1.0 / alpha) *
                        std::pow(gb.phi, 1.0 / (beta * lambda));
    InequalityReport r2 = make_report("uncertainty-general-2", lhs2, rhs2,
                                      1e-7 + gb.rel_err);
    for (auto* r : {&r1, &r2}) {
        r->params["alpha"] = alpha;
        r->params["beta"] = beta;
        r->params["q"] = q;
        r->params["k"] = k;
        r->params["lambda"] = lambda;
        r->params["n"] = n;
    }
    return {r1, r2};
}

EuclideanUncertainty check_uncertainty_euclidean(const WaveFunction& psi, double q,
                                                 double gamma_mom, double theta_mom,
                                                 const QuadratureConfig& cfg) {
    if (!(gamma_mom >= 2.0) || !(theta_mom >= 2.0))
        throw DomainError("uncertainty-euclidean requires moment orders >= 2");
    const int n = psi.dim();
    if (!(q > DeformationIndex::admissibility_threshold(n, 2.0)))
        throw AdmissibilityError("uncertainty-euclidean: q below the admissible range");
    if (!(2.0 * q - 1.0 > 0.0))
        throw AdmissibilityError("uncertainty-euclidean requires q > 1/2");
    const double k = 2.0 / (2.0 * q - 1.0);
    const double lambda = n * (q - 1.0) + 1.0;

    const WaveFunction hat = fourier(psi);
    const double m_k2 = wave_info_generating(psi, 0.5 * k);
    const double m_kq2 = wave_info_generating(psi, 0.5 * k * q);
    const double ex = wave_escort_moment(psi, 0.5 * k, gamma_mom, 2.0);
    const double exi = wave_escort_moment(hat, 1.0, theta_mom, 2.0);

    EuclideanUncertainty out;
    out.k = k;
    out.lambda = lambda;

    const double lhs1 = std::sqrt(m_k2) / m_kq2 * std::pow(ex, 1.0 / gamma_mom) *
                        std::pow(exi, 1.0 / theta_mom);
    const double rhs1 = n / (2.0 * kPi * k * q);
    out.first = make_report("uncertainty-euclidean-1", lhs1, rhs1, 1e-7);

    const BaselineMeasures gb = anchor_baselines(q, 2.0, n, NormSpec::lp(2.0, n), 2.0, cfg);
    const double anchor = std::sqrt(gb.m_alpha) * std::pow(gb.phi, 0.5 / lambda);
    const double lhs2 = std::pow(m_k2, -1.0 / (k * lambda)) *
                        std::pow(ex, 1.0 / gamma_mom) * std::pow(exi, 1.0 / (theta_mom * lambda));
    const double rhs2 = std::pow(2.0 * kPi * k, -1.0 / lambda) * anchor;
    out.second = make_report("uncertainty-euclidean-2", lhs2, rhs2, 1e-7 + gb.rel_err);

    if (k > 2.0) {
        const double lhs3 =
            std::pow(ex, 1.0 / gamma_mom) * std::pow(exi, 1.0 / (theta_mom * lambda));
        out.weak = make_report("uncertainty-euclidean-weak", lhs3, rhs2, 1e-7 + gb.rel_err);
    }
    for (auto* r : {&out.first, &out.second}) {
        r->params["q"] = q;
        r->params["k"] = k;
        r->params["lambda"] = lambda;
        r->params["gamma_mom"] = gamma_mom;
        r->params["theta_mom"] = theta_mom;
        r->params["n"] = n;
    }
    if (out.weak) {
        out.weak->params = out.second.params;
    }
    return out;
}

InequalityReport heisenberg_check(const WaveFunction& psi, bool centered) {
    if (psi.dim() != 1) throw DimensionError("heisenberg_check is 1-D");
    const WaveFunction hat = fourier(psi);
    auto second_moment = [&](const WaveFunction& w) {
        const double mass =
            par::sum(w.size(), [&](std::size_t i) { return w.weight(i) * std::norm(w.values[i]); });
        double mean = 0.0;
        if (centered) {
            mean = par::sum(w.size(),
                            [&](std::size_t i) {
                                return w.weight(i) * w.axes[0].coord(i) * std::norm(w.values[i]);
                            }) /
                   mass;
        }
        return par::sum(w.size(),
                        [&](std::size_t i) {
                            const double d = w.axes[0].coord(i) - mean;
                            return w.weight(i) * d * d * std::norm(w.values[i]);
                        }) /
               mass;
    };
    const double vx = second_moment(psi);
    const double vxi = second_moment(hat);
    const double lhs = vx * vxi;
    const double rhs = 1.0 / (16.0 * kPi * kPi);
    InequalityReport r = make_report("heisenberg", lhs, rhs, 1e-8, 1e-6);
    r.params["var_x"] = vx;
    r.params["var_xi"] = vxi;
    r.params["centered"] = centered ? 1.0 : 0.0;
    return r;
}

}  // namespace qcr
