#include "spgemm/generators.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "spgemm/semiring.hpp"

namespace spgemm {

TriplesMatrix<double> gen_rmat(const RmatParams& p) {
    if (p.scale < 1 || p.scale > 40) throw std::invalid_argument("rmat: scale must be in [1, 40]");
    if (!(p.avg_degree >= 0)) throw std::invalid_argument("rmat: avg_degree must be non-negative");
    if (p.a < 0 || p.b < 0 || p.c < 0 || p.d < 0 || std::abs(p.a + p.b + p.c + p.d - 1.0) > 1e-9) {
        throw std::invalid_argument("rmat: quadrant probabilities must be non-negative and sum to 1");
    }
    const index_t n = index_t{1} << p.scale;
    const auto edges = static_cast<index_t>(std::floor(p.avg_degree * static_cast<double>(n)));
    const double ab = p.a + p.b;
    const double abc = ab + p.c;

    TriplesMatrix<double> t(n, n);
    t.entries.reserve(static_cast<std::size_t>(edges));
    CounterRng rng(p.seed);
    for (index_t e = 0; e < edges; ++e) {
        index_t row = 0, col = 0;
        for (int level = p.scale - 1; level >= 0; --level) {
            const double r = rng.uniform();
            if (r < p.a) continue;
            if (r < ab) col |= index_t{1} << level;
            else if (r < abc) row |= index_t{1} << level;
            else {
                row |= index_t{1} << level;
                col |= index_t{1} << level;
            }
        }
        t.entries.push_back({row, col, 1.0});
    }
    normalize(t, PlusTimes<double>{});
    return t;
}

TriplesMatrix<double> gen_erdos_renyi(index_t n, index_t nnz_target, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("er: negative dimension");
    if (n > (index_t{1} << 31)) throw std::invalid_argument("er: dimension too large");
    const index_t cells = n * n;
    if (nnz_target < 0 || nnz_target > cells) {
        throw std::invalid_argument("er: nnz target must lie in [0, n^2]");
    }
    TriplesMatrix<double> t(n, n);
    if (nnz_target == 0) return t;
    if (nnz_target == cells) {
        t.entries.reserve(static_cast<std::size_t>(cells));
        for (index_t j = 0; j < n; ++j)
            for (index_t i = 0; i < n; ++i) t.entries.push_back({i, j, 1.0});
        return t;
    }
    const double q = static_cast<double>(nnz_target) / static_cast<double>(cells);
    const double log1mq = std::log1p(-q);
    t.entries.reserve(static_cast<std::size_t>(nnz_target + 4 * std::sqrt(static_cast<double>(nnz_target)) + 16));
    CounterRng rng(seed);
    // Walk positions in column-major order; the gap to the next present
    // position is geometric with success probability q.
    index_t pos = -1;
    for (;;) {
        const double u = 1.0 - rng.uniform();  // (0, 1]
        const double gap = std::floor(std::log(u) / log1mq);
        if (gap >= static_cast<double>(cells - pos - 1)) break;
        pos += static_cast<index_t>(gap) + 1;
        t.entries.push_back({pos % n, pos / n, 1.0});
    }
    return t;
}

TriplesMatrix<double> gen_grid3d(index_t k) {
    if (k < 1) throw std::invalid_argument("grid3d: k must be positive");
    const index_t n = k * k * k;
    TriplesMatrix<double> t(n, n);
    t.entries.reserve(static_cast<std::size_t>(7 * n));
    const index_t stride[3] = {1, k, k * k};
    for (index_t z = 0; z < k; ++z) {
        for (index_t y = 0; y < k; ++y) {
            for (index_t x = 0; x < k; ++x) {
                const index_t v = x + k * y + k * k * z;
                const index_t coord[3] = {x, y, z};
                t.entries.push_back({v, v, 1.0});
                for (int axis = 0; axis < 3; ++axis) {
                    if (coord[axis] > 0) t.entries.push_back({v - stride[axis], v, 1.0});
                    if (coord[axis] + 1 < k) t.entries.push_back({v + stride[axis], v, 1.0});
                }
            }
        }
    }
    normalize(t, PlusTimes<double>{});
    return t;
}

std::vector<index_t> random_permutation(index_t n, std::uint64_t seed) {
    if (n < 0) throw std::invalid_argument("permutation: negative size");
    std::vector<index_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), index_t{0});
    CounterRng rng(seed);
    for (index_t i = n - 1; i > 0; --i) {
        const auto j = static_cast<index_t>(rng.below(static_cast<std::uint64_t>(i + 1)));
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

void check_permutation(const std::vector<index_t>& perm) {
    const auto n = static_cast<index_t>(perm.size());
    std::vector<std::uint8_t> seen(perm.size(), 0);
    for (auto v : perm) {
        if (v < 0 || v >= n) throw StructuralError("permutation value " + std::to_string(v) + " out of range");
        if (seen[v]) throw StructuralError("permutation repeats value " + std::to_string(v));
        seen[v] = 1;
    }
}

std::vector<index_t> inverse_permutation(const std::vector<index_t>& perm) {
    check_permutation(perm);
    std::vector<index_t> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<index_t>(i);
    return inv;
}

TriplesMatrix<double> permutation_matrix(const std::vector<index_t>& perm) {
    check_permutation(perm);
    const auto n = static_cast<index_t>(perm.size());
    TriplesMatrix<double> t(n, n);
    t.entries.reserve(perm.size());
    for (index_t i = 0; i < n; ++i) t.entries.push_back({perm[i], i, 1.0});
    return t;
}

}  // namespace spgemm
