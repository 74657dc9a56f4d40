#pragma once

/*
 * Sequential SpGEMM kernels.
 *
 *   gustavson_spgemm     column-by-column with a sparse accumulator, CSC in
 *                        and out. O(n + nnz + flops).
 *   hypersparse_spgemm   outer-product formulation on DCSC operands:
 *                        intersect A.jc with Bt.jc, then merge the implicit
 *                        cartesian-product lists through a heap of size ni.
 *                        O(nzc(A) + nzc(B) + flops lg ni), no n term.
 *   dense_oracle         triple loop, ground truth for tests.
 *
 * flops counts scalar multiplications only. For every product
 *   flops = sum over i in Isect of nnz(A(:,i)) * nnz(B(i,:)).
 *
 * Both sparse kernels accumulate each output entry in increasing inner index
 * order, so for a fixed semiring they produce bit-identical results.
 */

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spgemm/common.hpp"
#include "spgemm/csc.hpp"
#include "spgemm/dcsc.hpp"
#include "spgemm/merge_heap.hpp"
#include "spgemm/semiring.hpp"
#include "spgemm/spa.hpp"
#include "spgemm/triples.hpp"

namespace spgemm {

struct KernelCounters {
    std::uint64_t multiplications = 0;  // flops
    std::uint64_t additions = 0;
    std::uint64_t heap_ops = 0;      // pushes + pops + key comparisons
    std::uint64_t isect_scans = 0;   // steps of the jc intersection merge
    std::uint64_t column_scans = 0;  // dimension-proportional work: columns visited, SPA slots allocated

    /// Work of the hypersparse kernel: intersection plus heap traffic.
    std::uint64_t hypersparse_work() const { return isect_scans + heap_ops; }

    KernelCounters& operator+=(const KernelCounters& o) {
        multiplications += o.multiplications;
        additions += o.additions;
        heap_ops += o.heap_ops;
        isect_scans += o.isect_scans;
        column_scans += o.column_scans;
        return *this;
    }
    friend bool operator==(const KernelCounters&, const KernelCounters&) = default;
};

template <class M>
struct ProductResult {
    M matrix;
    KernelCounters counters;
};

// ---------------------------------------------------------------------------
// Intersection
// ---------------------------------------------------------------------------

/// One index i present in both A.jc and Bt.jc with its positions and extents.
struct IsectEntry {
    index_t index;
    std::size_t a_pos;  // position of column i in A.jc
    std::size_t b_pos;  // position of column i in Bt.jc (row i of B)
    index_t a_nnz;      // nnz(A(:, i))
    index_t b_nnz;      // nnz(B(i, :))
};

/// Linear merge of two strictly increasing id arrays. `scans` (if given) is
/// incremented once per merge step.
inline std::vector<IsectEntry> intersect_jc(std::span<const index_t> ja, std::span<const index_t> jb,
                                            std::uint64_t* scans = nullptr) {
    std::vector<IsectEntry> out;
    std::size_t i = 0, j = 0;
    std::uint64_t steps = 0;
    while (i < ja.size() && j < jb.size()) {
        ++steps;
        if (ja[i] < jb[j]) {
            ++i;
        } else if (jb[j] < ja[i]) {
            ++j;
        } else {
            out.push_back({ja[i], i, j, 0, 0});
            ++i;
            ++j;
        }
    }
    if (scans) *scans += steps;
    return out;
}

/// Intersection of the nonempty columns of `a` with the nonempty columns of
/// `bt` (= nonempty rows of B), with per-index nnz extents filled in.
template <class T>
std::vector<IsectEntry> intersect_jc(const DcscMatrix<T>& a, const DcscMatrix<T>& bt, std::uint64_t* scans = nullptr) {
    auto isect = intersect_jc(std::span<const index_t>(a.jc), std::span<const index_t>(bt.jc), scans);
    for (auto& e : isect) {
        e.a_nnz = a.col_nnz(e.a_pos);
        e.b_nnz = bt.col_nnz(e.b_pos);
    }
    return isect;
}

// ---------------------------------------------------------------------------
// Flop counting
// ---------------------------------------------------------------------------

/// flops(A*B) from A and Bt in DCSC, without forming the product.
template <class T>
std::uint64_t count_flops(const DcscMatrix<T>& a, const DcscMatrix<T>& bt) {
    std::uint64_t flops = 0;
    std::size_t i = 0, j = 0;
    while (i < a.jc.size() && j < bt.jc.size()) {
        if (a.jc[i] < bt.jc[j]) {
            ++i;
        } else if (bt.jc[j] < a.jc[i]) {
            ++j;
        } else {
            flops += static_cast<std::uint64_t>(a.col_nnz(i)) * static_cast<std::uint64_t>(bt.col_nnz(j));
            ++i;
            ++j;
        }
    }
    return flops;
}

/// flops(A*B) from CSC operands.
template <class T>
std::uint64_t count_flops(const CscMatrix<T>& a, const CscMatrix<T>& b) {
    if (a.ncols != b.nrows) throw DimensionError("count_flops: inner dimensions differ");
    std::vector<std::uint64_t> row_nnz(static_cast<std::size_t>(b.nrows), 0);
    for (auto r : b.rowind) ++row_nnz[r];
    std::uint64_t flops = 0;
    for (index_t k = 0; k < a.ncols; ++k) {
        flops += static_cast<std::uint64_t>(a.colptr[k + 1] - a.colptr[k]) * row_nnz[k];
    }
    return flops;
}

// ---------------------------------------------------------------------------
// Classical column-wise kernel
// ---------------------------------------------------------------------------

template <Semiring S>
ProductResult<CscMatrix<scalar_t<S>>> gustavson_spgemm(const CscMatrix<scalar_t<S>>& a,
                                                       const CscMatrix<scalar_t<S>>& b, const S& s) {
    using V = scalar_t<S>;
    if (a.ncols != b.nrows) {
        throw DimensionError("gustavson_spgemm: A is " + std::to_string(a.nrows) + "x" + std::to_string(a.ncols) +
                             ", B is " + std::to_string(b.nrows) + "x" + std::to_string(b.ncols));
    }
    ProductResult<CscMatrix<V>> res{CscMatrix<V>(a.nrows, b.ncols), {}};
    auto& c = res.matrix;
    auto& cnt = res.counters;
    const V zero = s.zero();

    Spa<V> spa(a.nrows);
    cnt.column_scans += static_cast<std::uint64_t>(a.nrows);

    for (index_t j = 0; j < b.ncols; ++j) {
        ++cnt.column_scans;
        for (index_t kb = b.colptr[j]; kb < b.colptr[j + 1]; ++kb) {
            const index_t k = b.rowind[kb];
            const V& bv = b.vals[kb];
            for (index_t ka = a.colptr[k]; ka < a.colptr[k + 1]; ++ka) {
                ++cnt.multiplications;
                if (spa.accumulate(a.rowind[ka], s.multiply(a.vals[ka], bv), s)) ++cnt.additions;
            }
        }
        spa.unload_sorted(zero, [&](index_t i, const V& v) {
            c.rowind.push_back(i);
            c.vals.push_back(v);
        });
        c.colptr[j + 1] = c.nnz();
    }
    return res;
}

// ---------------------------------------------------------------------------
// Hypersparse outer-product kernel
// ---------------------------------------------------------------------------

/// C = A * B where `bt` holds B transposed, both in DCSC. The caller owns the
/// transposition so it can be amortized over many uses of the same block.
///
/// Each i in Isect defines an implicit list of nnz(A(:,i)) * nnz(B(i,:))
/// products sorted column-major (B's column outer, A's row inner). The heap
/// holds the current head of every list; popping yields the global minimum,
/// which either starts a new output entry or is added to the last one.
template <Semiring S>
ProductResult<DcscMatrix<scalar_t<S>>> hypersparse_spgemm(const DcscMatrix<scalar_t<S>>& a,
                                                          const DcscMatrix<scalar_t<S>>& bt, const S& s) {
    using V = scalar_t<S>;
    if (a.ncols != bt.ncols) {
        throw DimensionError("hypersparse_spgemm: A has " + std::to_string(a.ncols) + " columns, B has " +
                             std::to_string(bt.ncols) + " rows");
    }
    ProductResult<DcscMatrix<V>> res{DcscMatrix<V>(a.nrows, bt.nrows), {}};
    auto& cnt = res.counters;

    const auto isect = intersect_jc(a, bt, &cnt.isect_scans);
    if (isect.empty()) return res;

    struct Cursor {
        index_t a_begin, a_end, a_cur;
        index_t b_cur, b_end;
    };
    std::vector<Cursor> lists;
    lists.reserve(isect.size());

    MergeHeap<V> heap;
    heap.reserve(isect.size());

    auto push_head = [&](std::uint32_t l) {
        const Cursor& cur = lists[l];
        ++cnt.multiplications;
        heap.push({bt.ir[cur.b_cur], a.ir[cur.a_cur], l, s.multiply(a.vals[cur.a_cur], bt.vals[cur.b_cur])});
    };

    for (const auto& e : isect) {
        const index_t ab = a.cp[e.a_pos], bb = bt.cp[e.b_pos];
        lists.push_back({ab, a.cp[e.a_pos + 1], ab, bb, bt.cp[e.b_pos + 1]});
        push_head(static_cast<std::uint32_t>(lists.size() - 1));
    }

    // Column-major output stack.
    std::vector<index_t> out_col, out_row;
    std::vector<V> out_val;
    while (!heap.empty()) {
        auto top = heap.pop();
        if (!out_col.empty() && out_col.back() == top.col && out_row.back() == top.row) {
            out_val.back() = s.add(out_val.back(), top.val);
            ++cnt.additions;
        } else {
            out_col.push_back(top.col);
            out_row.push_back(top.row);
            out_val.push_back(std::move(top.val));
        }
        Cursor& cur = lists[top.source];
        if (++cur.a_cur == cur.a_end) {
            cur.a_cur = cur.a_begin;
            ++cur.b_cur;
        }
        if (cur.b_cur < cur.b_end) push_head(top.source);
    }
    cnt.heap_ops = heap.ops();

    // Assemble DCSC, dropping entries that cancelled to zero.
    auto& c = res.matrix;
    const V zero = s.zero();
    for (std::size_t k = 0; k < out_col.size(); ++k) {
        if (out_val[k] == zero) continue;
        if (c.jc.empty() || c.jc.back() != out_col[k]) {
            if (!c.jc.empty()) c.cp.push_back(c.nnz());
            c.jc.push_back(out_col[k]);
        }
        c.ir.push_back(out_row[k]);
        c.vals.push_back(out_val[k]);
    }
    if (!c.jc.empty()) c.cp.push_back(c.nnz());
    return res;
}

/// Convenience overload that transposes B itself.
template <Semiring S>
ProductResult<DcscMatrix<scalar_t<S>>> hypersparse_multiply(const DcscMatrix<scalar_t<S>>& a,
                                                            const DcscMatrix<scalar_t<S>>& b, const S& s) {
    if (a.ncols != b.nrows) throw DimensionError("hypersparse_multiply: inner dimensions differ");
    return hypersparse_spgemm(a, transpose(b), s);
}

// ---------------------------------------------------------------------------
// Elementwise sum of several matrices
// ---------------------------------------------------------------------------

/// Sum of same-shaped matrices. For every position the values are folded left
/// to right in the order the matrices are given, so lazily merging a batch is
/// bit-identical to adding the matrices one at a time. `additions` (if given)
/// is incremented once per semiring add.
template <Semiring S>
DcscMatrix<scalar_t<S>> add_matrices(std::span<const DcscMatrix<scalar_t<S>>* const> parts, const S& s,
                                     std::uint64_t* additions = nullptr) {
    using V = scalar_t<S>;
    if (parts.empty()) throw std::invalid_argument("add_matrices: no operands");
    const index_t m = parts.front()->nrows, n = parts.front()->ncols;
    std::vector<Triple<V>> all;
    std::size_t total = 0;
    for (const auto* p : parts) {
        if (p->nrows != m || p->ncols != n) throw DimensionError("add_matrices: shapes differ");
        total += p->ir.size();
    }
    if (parts.size() == 1) return *parts.front();
    all.reserve(total);
    for (const auto* p : parts) {
        for (std::size_t k = 0; k < p->jc.size(); ++k) {
            for (auto q = p->cp[k]; q < p->cp[k + 1]; ++q) all.push_back({p->ir[q], p->jc[k], p->vals[q]});
        }
    }
    std::stable_sort(all.begin(), all.end(), ColumnMajorLess{});
    TriplesMatrix<V> t(m, n);
    const V zero = s.zero();
    std::uint64_t adds = 0;
    for (std::size_t k = 0; k < all.size();) {
        V acc = all[k].val;
        std::size_t next = k + 1;
        while (next < all.size() && all[next].row == all[k].row && all[next].col == all[k].col) {
            acc = s.add(acc, all[next].val);
            ++adds;
            ++next;
        }
        if (!(acc == zero)) t.entries.push_back({all[k].row, all[k].col, acc});
        k = next;
    }
    if (additions) *additions += adds;
    return to_dcsc(t);
}

// ---------------------------------------------------------------------------
// Dense oracle
// ---------------------------------------------------------------------------

inline constexpr index_t kDenseOracleLimit = 1024;

/// Column-major dense matrix, used only as test ground truth.
template <class T>
struct DenseMatrix {
    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<T> data;

    T& operator()(index_t i, index_t j) { return data[static_cast<std::size_t>(j * nrows + i)]; }
    const T& operator()(index_t i, index_t j) const { return data[static_cast<std::size_t>(j * nrows + i)]; }
};

template <Semiring S>
DenseMatrix<scalar_t<S>> to_dense(const TriplesMatrix<scalar_t<S>>& t, const S& s) {
    if (t.nrows > kDenseOracleLimit || t.ncols > kDenseOracleLimit) {
        throw std::length_error("dense oracle limited to " + std::to_string(kDenseOracleLimit) + " rows/columns");
    }
    DenseMatrix<scalar_t<S>> d{t.nrows, t.ncols, std::vector<scalar_t<S>>(static_cast<std::size_t>(t.nrows * t.ncols), s.zero())};
    for (const auto& e : t.entries) d(e.row, e.col) = s.add(d(e.row, e.col), e.val);
    return d;
}

/// C(i,j) = add over k of A(i,k) * B(k,j), every k visited, k increasing.
template <Semiring S>
DenseMatrix<scalar_t<S>> dense_oracle(const TriplesMatrix<scalar_t<S>>& a, const TriplesMatrix<scalar_t<S>>& b,
                                      const S& s) {
    if (a.ncols != b.nrows) throw DimensionError("dense_oracle: inner dimensions differ");
    const auto da = to_dense(a, s);
    const auto db = to_dense(b, s);
    DenseMatrix<scalar_t<S>> c{a.nrows, b.ncols, std::vector<scalar_t<S>>(static_cast<std::size_t>(a.nrows * b.ncols), s.zero())};
    for (index_t j = 0; j < b.ncols; ++j) {
        for (index_t i = 0; i < a.nrows; ++i) {
            auto acc = s.zero();
            for (index_t k = 0; k < a.ncols; ++k) acc = s.add(acc, s.multiply(da(i, k), db(k, j)));
            c(i, j) = acc;
        }
    }
    return c;
}

/// Nonzero entries of a dense matrix as normalized triples.
template <Semiring S>
TriplesMatrix<scalar_t<S>> from_dense(const DenseMatrix<scalar_t<S>>& d, const S& s) {
    TriplesMatrix<scalar_t<S>> t(d.nrows, d.ncols);
    const auto zero = s.zero();
    for (index_t j = 0; j < d.ncols; ++j) {
        for (index_t i = 0; i < d.nrows; ++i) {
            if (!(d(i, j) == zero)) t.entries.push_back({i, j, d(i, j)});
        }
    }
    return t;
}

}  // namespace spgemm
