#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "spgemm/common.hpp"
#include "spgemm/semiring.hpp"

namespace spgemm {

template <class T>
struct Triple {
    index_t row = 0;
    index_t col = 0;
    T val{};

    friend bool operator==(const Triple&, const Triple&) = default;
};

/// Column-major strict weak order on (col, row); values are ignored.
struct ColumnMajorLess {
    template <class T>
    bool operator()(const Triple<T>& a, const Triple<T>& b) const {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    }
};

/// Coordinate ("triples") storage: an unordered list of (row, col, val).
///
/// A normalized TriplesMatrix is sorted column-major, has no duplicate
/// positions and stores no semiring zeros. Most consumers require normalized
/// input; see normalize().
template <class T>
struct TriplesMatrix {
    using value_type = T;

    index_t nrows = 0;
    index_t ncols = 0;
    std::vector<Triple<T>> entries;

    TriplesMatrix() = default;
    TriplesMatrix(index_t m, index_t n, std::vector<Triple<T>> e = {})
        : nrows(m), ncols(n), entries(std::move(e)) {}

    index_t nnz() const { return static_cast<index_t>(entries.size()); }

    void push(index_t i, index_t j, T v) { entries.push_back({i, j, std::move(v)}); }

    friend bool operator==(const TriplesMatrix&, const TriplesMatrix&) = default;
};

/// Throws StructuralError if any entry lies outside the matrix.
template <class T>
void validate_indices(const TriplesMatrix<T>& t) {
    if (t.nrows < 0 || t.ncols < 0) throw StructuralError("negative matrix dimension");
    for (const auto& e : t.entries) {
        if (e.row < 0 || e.row >= t.nrows || e.col < 0 || e.col >= t.ncols) {
            throw StructuralError("entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) +
                                  ") outside " + std::to_string(t.nrows) + "x" +
                                  std::to_string(t.ncols) + " matrix");
        }
    }
}

/// True if entries are strictly increasing in column-major order
/// (sorted, no duplicate positions). Values are not inspected.
template <class T>
bool is_sorted_unique(const TriplesMatrix<T>& t) {
    ColumnMajorLess less;
    for (std::size_t k = 1; k < t.entries.size(); ++k) {
        if (!less(t.entries[k - 1], t.entries[k])) return false;
    }
    return true;
}

/// Sorts column-major, folds duplicate positions with the semiring add (in
/// their original input order) and drops entries equal to zero.
template <Semiring S>
void normalize(TriplesMatrix<scalar_t<S>>& t, const S& s) {
    validate_indices(t);
    auto& e = t.entries;
    std::stable_sort(e.begin(), e.end(), ColumnMajorLess{});
    const auto zero = s.zero();
    std::size_t out = 0;
    for (std::size_t k = 0; k < e.size();) {
        auto acc = e[k].val;
        std::size_t next = k + 1;
        while (next < e.size() && e[next].row == e[k].row && e[next].col == e[k].col) {
            acc = s.add(acc, e[next].val);
            ++next;
        }
        if (!(acc == zero)) {
            e[out] = {e[k].row, e[k].col, acc};
            ++out;
        }
        k = next;
    }
    e.resize(out);
}

template <Semiring S>
TriplesMatrix<scalar_t<S>> normalized(TriplesMatrix<scalar_t<S>> t, const S& s) {
    normalize(t, s);
    return t;
}

/// Maps every value through f (e.g. double -> boolean byte). Structure is kept
/// as is; renormalize afterwards if f can produce the target zero.
template <class U, class T, class F>
TriplesMatrix<U> map_values(const TriplesMatrix<T>& t, F&& f) {
    TriplesMatrix<U> out(t.nrows, t.ncols);
    out.entries.reserve(t.entries.size());
    for (const auto& e : t.entries) out.entries.push_back({e.row, e.col, static_cast<U>(f(e.val))});
    return out;
}

}  // namespace spgemm
