#pragma once

/*
 * Doubly compressed sparse columns.
 *
 * DCSC is a sparse array of sparse columns: only nonempty columns get an
 * entry in jc (their column ids) and cp (their offsets into ir/vals). Total
 * storage is 2*nzc + 1 + nnz index words plus nnz values, independent of
 * ncols, which is what keeps 2D sub-blocks cheap once they become hypersparse
 * (nnz < dimension).
 *
 * Example, 9x9 with entries (5,0) (7,0) (3,6) (1,7) (0-based):
 *   jc = [0, 6, 7]   cp = [0, 2, 3, 4]   ir = [5, 7, 3, 1]
 */

#include <algorithm>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spgemm/common.hpp"
#include "spgemm/csc.hpp"
#include "spgemm/triples.hpp"

namespace spgemm {

template <class T>
struct DcscMatrix {
    using value_type = T;

    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> jc;      // ids of nonempty columns, strictly increasing
    std::vector<index_t> cp{0};   // |jc| + 1 offsets into ir / vals
    std::vector<index_t> ir;      // row ids, strictly increasing within a column
    std::vector<T> vals;

    // Column lookup accelerator. Empty unless built by build_aux(); never
    // part of equality or index_storage().
    std::vector<index_t> aux;
    index_t aux_chunk = 0;

    DcscMatrix() = default;
    DcscMatrix(index_t m, index_t n) : nrows(m), ncols(n) {}

    index_t nnz() const { return static_cast<index_t>(ir.size()); }
    index_t nzc() const { return static_cast<index_t>(jc.size()); }

    /// |jc| + |cp| + |ir| = 2*nzc + 1 + nnz.
    std::size_t index_storage() const { return jc.size() + cp.size() + ir.size(); }

    index_t col_nnz(std::size_t pos) const { return cp[pos + 1] - cp[pos]; }

    std::span<const index_t> rows_at(std::size_t pos) const {
        return {ir.data() + cp[pos], static_cast<std::size_t>(cp[pos + 1] - cp[pos])};
    }
    std::span<const T> vals_at(std::size_t pos) const {
        return {vals.data() + cp[pos], static_cast<std::size_t>(cp[pos + 1] - cp[pos])};
    }

    /// Position of column c in jc, or nullopt when the column is empty.
    /// Uses aux when it has been built, binary search on jc otherwise.
    std::optional<std::size_t> find_column(index_t c) const {
        if (c < 0 || c >= ncols || jc.empty()) return std::nullopt;
        if (!aux.empty()) {
            const auto chunk = static_cast<std::size_t>(c / aux_chunk);
            for (auto pos = aux[chunk]; pos < aux[chunk + 1]; ++pos) {
                if (jc[pos] == c) return static_cast<std::size_t>(pos);
            }
            return std::nullopt;
        }
        auto it = std::lower_bound(jc.begin(), jc.end(), c);
        if (it == jc.end() || *it != c) return std::nullopt;
        return static_cast<std::size_t>(it - jc.begin());
    }

    friend bool operator==(const DcscMatrix& a, const DcscMatrix& b) {
        return a.nrows == b.nrows && a.ncols == b.ncols && a.jc == b.jc && a.cp == b.cp && a.ir == b.ir &&
               a.vals == b.vals;
    }
};

/// Throws StructuralError unless every DCSC invariant holds.
template <class T>
void validate(const DcscMatrix<T>& d) {
    auto fail = [](const char* what) { throw StructuralError(std::string("invalid DCSC: ") + what); };
    if (d.cp.size() != d.jc.size() + 1) fail("|cp| != nzc + 1");
    if (d.ir.size() != d.vals.size()) fail("|ir| != |vals|");
    if (d.cp.front() != 0 || d.cp.back() != d.nnz()) fail("cp must span [0, nnz]");
    for (std::size_t k = 0; k < d.jc.size(); ++k) {
        if (d.jc[k] < 0 || d.jc[k] >= d.ncols) fail("column id out of range");
        if (k > 0 && d.jc[k - 1] >= d.jc[k]) fail("jc not strictly increasing");
        if (d.cp[k] >= d.cp[k + 1]) fail("listed column is empty");
        for (auto p = d.cp[k]; p < d.cp[k + 1]; ++p) {
            if (d.ir[p] < 0 || d.ir[p] >= d.nrows) fail("row id out of range");
            if (p > d.cp[k] && d.ir[p - 1] >= d.ir[p]) fail("rows not strictly increasing");
        }
    }
}

/// Builds DCSC from normalized triples in a single pass.
template <class T>
DcscMatrix<T> to_dcsc(const TriplesMatrix<T>& t) {
    validate_indices(t);
    if (!is_sorted_unique(t)) throw StructuralError("triples must be sorted column-major without duplicates");
    DcscMatrix<T> d(t.nrows, t.ncols);
    d.ir.reserve(t.entries.size());
    d.vals.reserve(t.entries.size());
    for (const auto& e : t.entries) {
        if (d.jc.empty() || d.jc.back() != e.col) {
            if (!d.jc.empty()) d.cp.push_back(d.nnz());
            d.jc.push_back(e.col);
        }
        d.ir.push_back(e.row);
        d.vals.push_back(e.val);
    }
    if (!d.jc.empty()) d.cp.push_back(d.nnz());
    return d;
}

template <class T>
TriplesMatrix<T> to_triples(const DcscMatrix<T>& d) {
    TriplesMatrix<T> t(d.nrows, d.ncols);
    t.entries.reserve(d.ir.size());
    for (std::size_t k = 0; k < d.jc.size(); ++k) {
        for (auto p = d.cp[k]; p < d.cp[k + 1]; ++p) t.entries.push_back({d.ir[p], d.jc[k], d.vals[p]});
    }
    return t;
}

template <class T>
DcscMatrix<T> to_dcsc(const CscMatrix<T>& c) {
    DcscMatrix<T> d(c.nrows, c.ncols);
    d.ir = c.rowind;
    d.vals = c.vals;
    for (index_t j = 0; j < c.ncols; ++j) {
        if (c.colptr[j + 1] > c.colptr[j]) {
            d.jc.push_back(j);
            d.cp.push_back(c.colptr[j + 1]);
        }
    }
    return d;
}

template <class T>
CscMatrix<T> to_csc(const DcscMatrix<T>& d) {
    CscMatrix<T> c(d.nrows, d.ncols);
    c.rowind = d.ir;
    c.vals = d.vals;
    for (std::size_t k = 0; k < d.jc.size(); ++k) c.colptr[d.jc[k] + 1] = d.col_nnz(k);
    for (index_t j = 0; j < c.ncols; ++j) c.colptr[j + 1] += c.colptr[j];
    return c;
}

/// Returns a copy of d with the aux column index populated.
///
/// Column ids are cut into ceil(ncols / nzc)-wide chunks; aux[t] is the jc
/// position of the first nonempty column whose id is >= t * chunk, and a final
/// sentinel aux[#chunks] = nzc closes the last range. An empty chunk t has
/// aux[t] == aux[t + 1]. Construction is O(nzc).
template <class T>
DcscMatrix<T> build_aux(DcscMatrix<T> d) {
    d.aux.clear();
    d.aux_chunk = 0;
    const index_t nzc = d.nzc();
    if (nzc == 0) return d;
    const index_t chunk = (d.ncols + nzc - 1) / nzc;
    const index_t nchunks = (d.ncols + chunk - 1) / chunk;
    d.aux.assign(static_cast<std::size_t>(nchunks) + 1, nzc);
    // Walk chunks backwards so that empty chunks inherit the next start.
    index_t pos = nzc;
    for (index_t t = nchunks - 1; t >= 0; --t) {
        while (pos > 0 && d.jc[pos - 1] >= t * chunk) --pos;
        d.aux[t] = pos;
    }
    d.aux_chunk = chunk;
    return d;
}

/// Transpose by key sort on (new column, new row): O(nnz lg nnz) and
/// independent of the dimensions.
template <class T>
DcscMatrix<T> transpose(const DcscMatrix<T>& d) {
    TriplesMatrix<T> t(d.ncols, d.nrows);
    t.entries.reserve(d.ir.size());
    for (std::size_t k = 0; k < d.jc.size(); ++k) {
        for (auto p = d.cp[k]; p < d.cp[k + 1]; ++p) t.entries.push_back({d.jc[k], d.ir[p], d.vals[p]});
    }
    std::sort(t.entries.begin(), t.entries.end(), ColumnMajorLess{});
    return to_dcsc(t);
}

/// Columns [lo, hi) of d as an nrows x (hi - lo) matrix with column ids
/// shifted down by lo. Cost O(lg nzc + columns in range + nnz in range).
template <class T>
DcscMatrix<T> column_slice(const DcscMatrix<T>& d, index_t lo, index_t hi) {
    if (lo < 0 || hi > d.ncols || lo > hi) throw DimensionError("column slice out of range");
    DcscMatrix<T> s(d.nrows, hi - lo);
    const auto first = static_cast<std::size_t>(std::lower_bound(d.jc.begin(), d.jc.end(), lo) - d.jc.begin());
    const auto last = static_cast<std::size_t>(std::lower_bound(d.jc.begin(), d.jc.end(), hi) - d.jc.begin());
    const auto base = d.cp[first];
    s.jc.reserve(last - first);
    s.cp.reserve(last - first + 1);
    for (auto k = first; k < last; ++k) {
        s.jc.push_back(d.jc[k] - lo);
        s.cp.push_back(d.cp[k + 1] - base);
    }
    s.ir.assign(d.ir.begin() + base, d.ir.begin() + d.cp[last]);
    s.vals.assign(d.vals.begin() + base, d.vals.begin() + d.cp[last]);
    return s;
}

}  // namespace spgemm
