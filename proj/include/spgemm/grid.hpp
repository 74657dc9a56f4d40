#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "spgemm/common.hpp"
#include "spgemm/dcsc.hpp"
#include "spgemm/stats.hpp"
#include "spgemm/triples.hpp"

namespace spgemm {

/// Logical pr x pc processor grid. Processor (i, j) has rank i * pc + j.
struct GridConfig {
    int pr = 1;
    int pc = 1;

    GridConfig() = default;
    GridConfig(int rows, int cols) : pr(rows), pc(cols) {
        if (pr < 1 || pc < 1) throw DimensionError("grid dimensions must be positive");
    }

    /// sqrt(p) x sqrt(p); throws DimensionError unless p is a perfect square.
    static GridConfig square(int p);

    int p() const { return pr * pc; }
    bool is_square() const { return pr == pc; }
    int rank(int i, int j) const { return i * pc + j; }
    int row_of(int rank) const { return rank / pc; }
    int col_of(int rank) const { return rank % pc; }

    friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

inline GridConfig GridConfig::square(int p) {
    int q = 0;
    while ((q + 1) * (q + 1) <= p) ++q;
    if (p < 1 || q * q != p) throw DimensionError("p = " + std::to_string(p) + " is not a positive perfect square");
    return {q, q};
}

/// First index of part i when [0, m) is cut into `parts` floor-split ranges:
/// floor(i * m / parts). Consecutive parts differ in size by at most one.
inline index_t split_point(index_t m, int parts, int i) { return i * m / parts; }

/// Part that owns index x under split_point().
inline int split_owner(index_t m, int parts, index_t x) {
    if (m == 0) return 0;
    int i = static_cast<int>(std::min<index_t>(parts - 1, x * parts / m));
    while (i + 1 < parts && split_point(m, parts, i + 1) <= x) ++i;
    while (i > 0 && split_point(m, parts, i) > x) --i;
    return i;
}

/// A matrix cut into pr x pc rectangular blocks. Block (i, j) holds global
/// rows [row_start(i), row_start(i+1)) and columns [col_start(j),
/// col_start(j+1)) in block-local coordinates.
template <class T>
struct DistMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    GridConfig grid;
    std::vector<DcscMatrix<T>> blocks;  // row-major over the grid

    index_t row_start(int i) const { return split_point(nrows, grid.pr, i); }
    index_t col_start(int j) const { return split_point(ncols, grid.pc, j); }

    DcscMatrix<T>& block(int i, int j) { return blocks[static_cast<std::size_t>(grid.rank(i, j))]; }
    const DcscMatrix<T>& block(int i, int j) const { return blocks[static_cast<std::size_t>(grid.rank(i, j))]; }

    index_t nnz() const {
        index_t total = 0;
        for (const auto& b : blocks) total += b.nnz();
        return total;
    }
};

/// Empty distributed matrix with correctly shaped blocks.
template <class T>
DistMatrix<T> make_dist(index_t m, index_t n, GridConfig g) {
    DistMatrix<T> d{m, n, g, {}};
    d.blocks.reserve(static_cast<std::size_t>(g.p()));
    for (int i = 0; i < g.pr; ++i) {
        for (int j = 0; j < g.pc; ++j) {
            d.blocks.emplace_back(d.row_start(i + 1) - d.row_start(i),
                                  d.col_start(j + 1) - d.col_start(j));
        }
    }
    return d;
}

/// Scatters normalized triples onto the grid. Every entry lands in exactly
/// one block; blocks come out in valid DCSC form.
template <class T>
DistMatrix<T> distribute_2d(const TriplesMatrix<T>& a, GridConfig g) {
    validate_indices(a);
    if (!is_sorted_unique(a)) throw StructuralError("distribute_2d: triples must be normalized");
    auto d = make_dist<T>(a.nrows, a.ncols, g);

    // Column-major input stays column-major inside every block.
    std::vector<TriplesMatrix<T>> parts;
    parts.reserve(d.blocks.size());
    for (const auto& b : d.blocks) parts.emplace_back(b.nrows, b.ncols);
    for (const auto& e : a.entries) {
        const int bi = split_owner(a.nrows, g.pr, e.row);
        const int bj = split_owner(a.ncols, g.pc, e.col);
        parts[static_cast<std::size_t>(g.rank(bi, bj))].entries.push_back(
            {e.row - d.row_start(bi), e.col - d.col_start(bj), e.val});
    }
    for (std::size_t r = 0; r < parts.size(); ++r) d.blocks[r] = to_dcsc(parts[r]);
    return d;
}

/// p consecutive block rows (a p x 1 grid).
template <class T>
DistMatrix<T> distribute_1d_rows(const TriplesMatrix<T>& a, int p) {
    return distribute_2d(a, GridConfig(p, 1));
}

/// Gathers all blocks back into normalized global triples.
template <class T>
TriplesMatrix<T> reassemble(const DistMatrix<T>& d) {
    TriplesMatrix<T> t(d.nrows, d.ncols);
    t.entries.reserve(static_cast<std::size_t>(d.nnz()));
    for (int i = 0; i < d.grid.pr; ++i) {
        for (int j = 0; j < d.grid.pc; ++j) {
            const auto& b = d.block(i, j);
            const index_t r0 = d.row_start(i), c0 = d.col_start(j);
            for (std::size_t k = 0; k < b.jc.size(); ++k) {
                for (auto q = b.cp[k]; q < b.cp[k + 1]; ++q) t.entries.push_back({b.ir[q] + r0, b.jc[k] + c0, b.vals[q]});
            }
        }
    }
    std::sort(t.entries.begin(), t.entries.end(), ColumnMajorLess{});
    return t;
}

/// Per-block statistics in rank order.
template <class T>
std::vector<MatrixStats> block_stats(const DistMatrix<T>& d) {
    std::vector<MatrixStats> out;
    out.reserve(d.blocks.size());
    for (const auto& b : d.blocks) out.push_back(stats(b));
    return out;
}

}  // namespace spgemm
