#include "qcr/qgaussian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qcr/parallel.hpp"
#include "qcr/rng.hpp"

namespace qcr {

namespace {

// unnormalized profile E(r) = exp_{2-q}(-gamma r^alpha) and its derivative
double profile_value(const QGaussianParams& p, double r) {
    return exp_q(-p.gamma * std::pow(r, p.alpha), 2.0 - p.q);
}

double profile_deriv(const QGaussianParams& p, double r) {
    if (r <= 0.0) return 0.0;
    const double u = -p.gamma * std::pow(r, p.alpha);
    return exp_q_deriv(u, 2.0 - p.q) * (-p.gamma * p.alpha * std::pow(r, p.alpha - 1.0));
}

void require_admissible(const QGaussianParams& p) {
    if (!p.admissible())
        throw AdmissibilityError("q-Gaussian requires q > (n - alpha)/n for a finite Z");
    if (!(p.alpha > 0.0) || !(p.gamma > 0.0) || p.dim < 1)
        throw DomainError("q-Gaussian requires alpha > 0, gamma > 0, n >= 1");
}

IntegralResult radial_power_integral(const QGaussianParams& p, double profile_power,
                                     double r_exponent, const QuadratureConfig& cfg) {
    auto f = [&](double r) {
        const double e = profile_value(p, r);
        if (e <= 0.0) return 0.0;
        return std::exp(profile_power * std::log(e) + r_exponent * std::log(r));
    };
    return quad::integrate_radial(f, p.r_max(), p.scale(), cfg,
                                  /*boundary_singular=*/p.q > 1.0);
}

}  // namespace

std::string QGaussianParams::to_string() const {
    std::ostringstream os;
    os << "qgauss:q=" << q << ",alpha=" << alpha << ",gamma=" << gamma << ",n=" << dim
       << ",norm=" << norm.to_string();
    return os.str();
}

QGaussianParams QGaussianParams::parse(const std::string& text) {
    std::string body = text;
    if (body.rfind("qgauss:", 0) == 0) body = body.substr(7);
    QGaussianParams p;
    std::string norm_text;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw DomainError("bad qgauss parameter: " + tok);
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "q")
            p.q = std::stod(val);
        else if (key == "alpha")
            p.alpha = std::stod(val);
        else if (key == "gamma")
            p.gamma = std::stod(val);
        else if (key == "n")
            p.dim = std::stoi(val);
        else if (key == "norm")
            norm_text = val;  // note: norms with ',' need the wlp grammar via CLI flag
        else
            throw DomainError("unknown qgauss key: " + key);
    }
    p.norm = norm_text.empty() ? NormSpec::lp(2.0, p.dim) : NormSpec::parse(norm_text, p.dim);
    return p;
}

double qgauss_partition(const QGaussianParams& p, const QuadratureConfig& cfg, double* rel_err) {
    require_admissible(p);
    auto res = radial_power_integral(p, 1.0, p.dim - 1.0, cfg);
    if (!res.converged) throw ConvergenceError("partition function quadrature did not converge");
    const double n_omega = p.dim * p.norm.unit_ball_volume();
    if (rel_err) *rel_err = res.rel_error();
    return n_omega * res.value;
}

Density qgauss_density(const QGaussianParams& p, const QuadratureConfig& cfg) {
    const double z = qgauss_partition(p, cfg);
    QGaussianParams params = p;
    Density::RadialProfile prof;
    prof.rmax = p.r_max();
    prof.scale = p.scale();
    prof.boundary_singular = p.q > 1.0;
    prof.value = [params, z](double r) { return profile_value(params, r) / z; };
    prof.deriv = [params, z](double r) { return profile_deriv(params, r) / z; };
    return Density::radial(std::move(prof), p.norm, cfg, /*check_normalization=*/false);
}

BaselineMeasures qgauss_baselines(const QGaussianParams& p, double beta,
                                  const QuadratureConfig& cfg) {
    require_admissible(p);
    const int n = p.dim;
    const double n_omega = n * p.norm.unit_ball_volume();

    auto zint = radial_power_integral(p, 1.0, n - 1.0, cfg);
    const double z = n_omega * zint.value;

    auto mint = radial_power_integral(p, 1.0, p.alpha + n - 1.0, cfg);
    if (!mint.converged || !std::isfinite(mint.value))
        throw ConvergenceError("moment integral diverged for these q-Gaussian parameters");
    const double m_alpha = n_omega * mint.value / z;

    auto qint = radial_power_integral(p, p.q, n - 1.0, cfg);
    const double m_q = n_omega * qint.value / std::pow(z, p.q);

    double n_q;
    if (std::abs(p.q - 1.0) < 1e-8) {
        // exp(Shannon entropy) via -E[ln g] = ln Z - E[ln E(r)]
        auto hint = quad::integrate_radial(
            [&](double r) {
                const double e = profile_value(p, r);
                if (e <= 0.0) return 0.0;
                return -e * std::log(e) * std::pow(r, n - 1.0);
            },
            p.r_max(), p.scale(), cfg, p.q > 1.0);
        n_q = std::exp(std::log(z) + n_omega * hint.value / z);
    } else {
        n_q = std::pow(m_q, 1.0 / (1.0 - p.q));
    }

    // phi_{beta,q}[G] collapses to a single radial integral:
    //   phi = n omega (gamma alpha)^beta Z^{-(beta(q-1)+1)} * I[E r^{(alpha-1)beta + n-1}]
    auto pint = radial_power_integral(p, 1.0, (p.alpha - 1.0) * beta + n - 1.0, cfg);
    if (!pint.converged || !std::isfinite(pint.value))
        throw ConvergenceError("Fisher integral diverged for these q-Gaussian parameters");
    const double phi = n_omega * std::pow(p.gamma * p.alpha, beta) *
                       std::pow(z, -(beta * (p.q - 1.0) + 1.0)) * pint.value;

    BaselineMeasures b;
    b.m_alpha = m_alpha;
    b.m_q = m_q;
    b.n_q = n_q;
    b.phi = phi;
    b.rel_err = std::max({zint.rel_error(), mint.rel_error(), qint.rel_error(),
                          pint.rel_error()});
    return b;
}

QGaussianSampler::QGaussianSampler(const QGaussianParams& p, const QuadratureConfig& cfg)
    : params_(p) {
    require_admissible(p);
    if (p.norm.kind() != NormSpec::Kind::Lp || std::isinf(p.norm.p()))
        throw DomainError("sampling supports finite-p Lp norms only");
    lp_ = p.norm.p();
    const int n = p.dim;

    // truncation radius: where the radial density r^{n-1} E(r) drops below
    // 1e-16 of its maximum (or the support radius)
    double r_hi = p.r_max();
    auto radial_density = [&](double r) {
        return profile_value(p, r) * std::pow(r, n - 1.0);
    };
    if (!std::isfinite(r_hi)) {
        double peak = 0.0;
        double probe = p.scale() / 64.0;
        for (int i = 0; i < 2000; ++i) {
            peak = std::max(peak, radial_density(probe));
            probe *= 1.02;
        }
        double r = p.scale();
        while (radial_density(r) > 1e-16 * peak && r < 1e9) r *= 1.25;
        r_hi = r;
    }

    const std::size_t kCells = 4096;
    radius_.resize(kCells + 1);
    cum_.assign(kCells + 1, 0.0);
    for (std::size_t i = 0; i <= kCells; ++i)
        radius_[i] = r_hi * static_cast<double>(i) / static_cast<double>(kCells);
    std::vector<double> cell_mass(kCells);
    par::for_each_index(kCells, [&](std::size_t i) {
        cell_mass[i] = quad::gk15(radial_density, radius_[i], radius_[i + 1]).value;
    });
    for (std::size_t i = 0; i < kCells; ++i) cum_[i + 1] = cum_[i] + cell_mass[i];
    const double total_inside = cum_[kCells];
    if (!(total_inside > 0.0)) throw ConvergenceError("degenerate radial mass in sampler");
    if (!std::isfinite(p.r_max())) {
        auto tail = quad::integrate_tail(radial_density, r_hi, cfg);
        tail_mass_ = tail.value / (total_inside + tail.value);
    }
    for (double& c : cum_) c /= total_inside;
}

std::vector<double> QGaussianSampler::draw(rng::Stream& stream) const {
    const int n = params_.dim;
    const double u = stream.next_double();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    std::size_t i = std::min<std::size_t>(
        cum_.size() - 2, static_cast<std::size_t>(std::max<long>(0, it - cum_.begin() - 1)));
    const double c0 = cum_[i], c1 = cum_[i + 1];
    const double t = c1 > c0 ? (u - c0) / (c1 - c0) : 0.5;
    const double r = radius_[i] + t * (radius_[i + 1] - radius_[i]);

    std::vector<double> x(n);
    double norm_p = 0.0;
    for (int d = 0; d < n; ++d) {
        const double w = stream.next_gamma(1.0 / lp_);
        const double y = std::pow(w, 1.0 / lp_);
        x[d] = stream.next_double() < 0.5 ? -y : y;
        norm_p += w;
    }
    const double nr = std::pow(norm_p, 1.0 / lp_);
    for (int d = 0; d < n; ++d) x[d] = r * x[d] / nr;
    return x;
}

SampleResult qgauss_sample(const QGaussianParams& p, std::size_t count, std::uint64_t seed,
                           const QuadratureConfig& cfg) {
    QGaussianSampler sampler(p, cfg);
    SampleResult out;
    out.tail_mass_bound = sampler.tail_mass_bound();
    out.points.assign(count, {});
    const std::size_t chunk = 1024;
    const std::size_t nchunks = par::chunk_count(count, chunk);
    par::for_each_index(nchunks, [&](std::size_t c) {
        rng::Stream stream(seed, c);
        const std::size_t lo = c * chunk;
        const std::size_t hi = std::min(lo + chunk, count);
        for (std::size_t k = lo; k < hi; ++k) out.points[k] = sampler.draw(stream);
    });
    return out;
}

}  // namespace qcr
