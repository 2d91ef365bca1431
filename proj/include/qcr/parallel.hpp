#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcr::par {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

// Pairwise combination in a fixed order; independent of thread count.
inline double pairwise(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::size_t n = v.size();
    while (n > 1) {
        std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) v[i] += v[i + half];
        n = half;
    }
    return v[0];
}

inline std::size_t chunk_count(std::size_t n, std::size_t chunk) {
    return n == 0 ? 0 : (n + chunk - 1) / chunk;
}

// Deterministic chunked sum. Chunk boundaries depend only on `chunk`, the
// per-chunk accumulation is serial, and partials combine pairwise in chunk
// order, so the result is bit-identical for any thread count.
template <class Term>
double sum(std::size_t n, Term&& term, std::size_t chunk = 2048) {
    const std::size_t nc = chunk_count(n, chunk);
    std::vector<double> partial(nc, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long c = 0; c < static_cast<long long>(nc); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(c)] = s;
    }
    return pairwise(std::move(partial));
}

// Serial reference for `sum`: identical chunking and combination order.
template <class Term>
double sum_serial(std::size_t n, Term&& term, std::size_t chunk = 2048) {
    const std::size_t nc = chunk_count(n, chunk);
    std::vector<double> partial(nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t lo = c * chunk;
        const std::size_t hi = lo + chunk < n ? lo + chunk : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[c] = s;
    }
    return pairwise(std::move(partial));
}

// Parallel loop writing to index-addressed outputs; order-independent.
template <class Body>
void for_each_index(std::size_t n, Body&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        body(static_cast<std::size_t>(i));
}

}  // namespace qcr::par
