#pragma once

#include <cstdint>
#include <vector>

#include "spgemm/common.hpp"
#include "spgemm/triples.hpp"

namespace spgemm {

/// Counter-based generator: value k of stream `seed` is splitmix64's output
/// function applied to seed + (k + 1) * golden-ratio increment. Streams are
/// platform independent and any position can be computed directly.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t at(std::uint64_t k) const { return mix(seed_ + (k + 1) * 0x9e3779b97f4a7c15ULL); }
    std::uint64_t next() { return at(counter_++); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0 (Lemire's multiply-shift with rejection).
    std::uint64_t below(std::uint64_t bound) {
        for (;;) {
            const auto x = next();
            const auto m = static_cast<unsigned __int128>(x) * bound;
            const auto lo = static_cast<std::uint64_t>(m);
            if (lo >= bound || lo >= (0 - bound) % bound) return static_cast<std::uint64_t>(m >> 64);
        }
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

struct RmatParams {
    int scale = 10;
    double avg_degree = 8.0;
    double a = 0.6;
    double b = 0.13;
    double c = 0.13;
    double d = 0.14;
    std::uint64_t seed = 1;
};

/// R-MAT: floor(avg_degree * n) edge draws, each descending `scale` quadrant
/// choices (a: top-left, b: top-right, c: bottom-left, d: bottom-right).
/// Every draw contributes value 1; repeated positions are summed. Output is
/// normalized. Throws std::invalid_argument on bad parameters.
TriplesMatrix<double> gen_rmat(const RmatParams& p);

/// Erdős–Rényi G(n, q) with q = nnz_target / n^2: every position is present
/// independently with probability q, value 1. Expected nnz is nnz_target;
/// 0 gives the empty matrix and n^2 the dense one. Runs in O(nnz) by sampling
/// geometric gaps between present positions. Output is normalized.
TriplesMatrix<double> gen_erdos_renyi(index_t n, index_t nnz_target, std::uint64_t seed);

/// 7-point stencil on a k x k x k mesh: vertex x + k*y + k*k*z is linked to
/// itself and to its axis neighbours, all with value 1. n = k^3 and
/// nnz = 7k^3 - 6k^2.
TriplesMatrix<double> gen_grid3d(index_t k);

/// Uniform random permutation of [0, n) (Fisher–Yates).
std::vector<index_t> random_permutation(index_t n, std::uint64_t seed);

/// Throws StructuralError unless perm is a bijection on [0, perm.size()).
void check_permutation(const std::vector<index_t>& perm);

std::vector<index_t> inverse_permutation(const std::vector<index_t>& perm);

/// P with P(perm[i], i) = 1, so (P x)[perm[i]] = x[i].
TriplesMatrix<double> permutation_matrix(const std::vector<index_t>& perm);

/// P A P^T: entry (i, j) moves to (perm[i], perm[j]). A must be square with
/// dimension perm.size(). Output is sorted column-major.
template <class T>
TriplesMatrix<T> apply_sym_perm(const TriplesMatrix<T>& a, const std::vector<index_t>& perm) {
    if (a.nrows != a.ncols || a.nrows != static_cast<index_t>(perm.size())) {
        throw DimensionError("apply_sym_perm: matrix and permutation sizes differ");
    }
    check_permutation(perm);
    TriplesMatrix<T> out(a.nrows, a.ncols);
    out.entries.reserve(a.entries.size());
    for (const auto& e : a.entries) out.entries.push_back({perm[e.row], perm[e.col], e.val});
    std::stable_sort(out.entries.begin(), out.entries.end(), ColumnMajorLess{});
    return out;
}

}  // namespace spgemm
