#pragma once

#include <algorithm>
#include <vector>

#include "spgemm/common.hpp"
#include "spgemm/csc.hpp"
#include "spgemm/dcsc.hpp"

namespace spgemm {

struct MatrixStats {
    index_t nrows = 0;
    index_t ncols = 0;
    index_t nnz = 0;
    index_t nzc = 0;  // columns holding at least one nonzero
    index_t nzr = 0;  // rows holding at least one nonzero

    /// nnz < max(nrows, ncols).
    bool hypersparse() const { return nnz < std::max(nrows, ncols); }
};

namespace detail {
inline index_t count_distinct(std::vector<index_t> ids) {
    std::sort(ids.begin(), ids.end());
    return static_cast<index_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}
}  // namespace detail

template <class T>
MatrixStats stats(const DcscMatrix<T>& d) {
    return {d.nrows, d.ncols, d.nnz(), d.nzc(), detail::count_distinct(d.ir)};
}

template <class T>
MatrixStats stats(const CscMatrix<T>& c) {
    index_t nzc = 0;
    for (index_t j = 0; j < c.ncols; ++j) nzc += c.colptr[j + 1] > c.colptr[j];
    return {c.nrows, c.ncols, c.nnz(), nzc, detail::count_distinct(c.rowind)};
}

}  // namespace spgemm
