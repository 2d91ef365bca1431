#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qcr::fft {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place radix-2 FFT of a contiguous line, kernel e^{sign 2 pi i j m / N}.
void fft_line(std::complex<double>* data, std::size_t n, int sign,
              std::span<const std::complex<double>> twiddle);

std::vector<std::complex<double>> make_twiddle(std::size_t n, int sign);

// FFT along every axis of a row-major n-D array. Lines are independent; the
// parallel version runs them under OpenMP and is bit-identical to the serial
// reference.
void fft_nd(std::vector<std::complex<double>>& values, const std::vector<std::size_t>& dims,
            int sign);
void fft_nd_serial(std::vector<std::complex<double>>& values,
                   const std::vector<std::size_t>& dims, int sign);

// O(N^2) reference transform for tests.
std::vector<std::complex<double>> dft_reference(std::span<const std::complex<double>> in,
                                                int sign);

}  // namespace qcr::fft
