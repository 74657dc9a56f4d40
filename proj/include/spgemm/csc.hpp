#pragma once

#include <span>
#include <vector>

#include "spgemm/common.hpp"
#include "spgemm/triples.hpp"

namespace spgemm {

/// Compressed sparse columns. Storage is Theta(ncols + nnz): colptr has one
/// slot per column whether or not the column holds anything.
template <class T>
struct CscMatrix {
    using value_type = T;

    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<index_t> colptr{0};
    std::vector<index_t> rowind;
    std::vector<T> vals;

    CscMatrix() = default;
    CscMatrix(index_t m, index_t n) : nrows(m), ncols(n), colptr(static_cast<std::size_t>(n) + 1, 0) {}

    index_t nnz() const { return static_cast<index_t>(rowind.size()); }

    /// Number of index words held: |colptr| + |rowind|.
    std::size_t index_storage() const { return colptr.size() + rowind.size(); }

    std::span<const index_t> rows_of(index_t j) const {
        return {rowind.data() + colptr[j], static_cast<std::size_t>(colptr[j + 1] - colptr[j])};
    }
    std::span<const T> vals_of(index_t j) const {
        return {vals.data() + colptr[j], static_cast<std::size_t>(colptr[j + 1] - colptr[j])};
    }

    friend bool operator==(const CscMatrix&, const CscMatrix&) = default;
};

/// Builds CSC from normalized triples. Throws StructuralError on out-of-range
/// or unsorted/duplicate input.
template <class T>
CscMatrix<T> to_csc(const TriplesMatrix<T>& t) {
    validate_indices(t);
    if (!is_sorted_unique(t)) throw StructuralError("triples must be sorted column-major without duplicates");
    CscMatrix<T> c(t.nrows, t.ncols);
    c.rowind.reserve(t.entries.size());
    c.vals.reserve(t.entries.size());
    for (const auto& e : t.entries) {
        ++c.colptr[e.col + 1];
        c.rowind.push_back(e.row);
        c.vals.push_back(e.val);
    }
    for (index_t j = 0; j < t.ncols; ++j) c.colptr[j + 1] += c.colptr[j];
    return c;
}

template <class T>
TriplesMatrix<T> to_triples(const CscMatrix<T>& c) {
    TriplesMatrix<T> t(c.nrows, c.ncols);
    t.entries.reserve(c.rowind.size());
    for (index_t j = 0; j < c.ncols; ++j) {
        for (index_t k = c.colptr[j]; k < c.colptr[j + 1]; ++k) t.entries.push_back({c.rowind[k], j, c.vals[k]});
    }
    return t;
}

}  // namespace spgemm
