#include "qcr/fft.hpp"

#include <stdexcept>

#include "qcr/common.hpp"
#include "qcr/parallel.hpp"

namespace qcr::fft {

std::vector<std::complex<double>> make_twiddle(std::size_t n, int sign) {
    std::vector<std::complex<double>> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sign * 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
        tw[k] = {std::cos(ang), std::sin(ang)};
    }
    return tw;
}

void fft_line(std::complex<double>* a, std::size_t n, int sign,
              std::span<const std::complex<double>> twiddle) {
    (void)sign;
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = twiddle[k * stride];
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

namespace {

template <bool Parallel>
void fft_nd_impl(std::vector<std::complex<double>>& values,
                 const std::vector<std::size_t>& dims, int sign) {
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (!is_pow2(d)) throw std::invalid_argument("fft requires power-of-two axis sizes");
        total *= d;
    }
    if (values.size() != total) throw std::invalid_argument("fft size mismatch");

    std::size_t stride = 1;  // stride of the current axis, walking from last to first
    for (std::size_t axis = dims.size(); axis-- > 0;) {
        const std::size_t n = dims[axis];
        const std::size_t lines = total / n;
        const auto twiddle = make_twiddle(n, sign);
        const std::size_t block = stride * n;

        auto run_line = [&](std::size_t line) {
            const std::size_t outer = line / stride;
            const std::size_t inner = line % stride;
            const std::size_t base = outer * block + inner;
            std::vector<std::complex<double>> buf(n);
            for (std::size_t j = 0; j < n; ++j) buf[j] = values[base + j * stride];
            fft_line(buf.data(), n, sign, twiddle);
            for (std::size_t j = 0; j < n; ++j) values[base + j * stride] = buf[j];
        };
        if constexpr (Parallel) {
            par::for_each_index(lines, run_line);
        } else {
            for (std::size_t line = 0; line < lines; ++line) run_line(line);
        }
        stride *= n;
    }
}

}  // namespace

void fft_nd(std::vector<std::complex<double>>& values, const std::vector<std::size_t>& dims,
            int sign) {
    fft_nd_impl<true>(values, dims, sign);
}

void fft_nd_serial(std::vector<std::complex<double>>& values,
                   const std::vector<std::size_t>& dims, int sign) {
    fft_nd_impl<false>(values, dims, sign);
}

std::vector<std::complex<double>> dft_reference(std::span<const std::complex<double>> in,
                                                int sign) {
    const std::size_t n = in.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sign * 2.0 * kPi * static_cast<double>(j * m % n) /
                               static_cast<double>(n);
            s += in[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[m] = s;
    }
    return out;
}

}  // namespace qcr::fft
