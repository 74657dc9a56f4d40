#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spgemm/common.hpp"

namespace spgemm {

/// Binary min-heap for the multiway merge inside the hypersparse kernel.
///
/// Keys are (col, row) in column-major order; ties are broken by the source
/// list id so equal keys pop in increasing list order. That makes the
/// accumulation order of every output entry deterministic (increasing inner
/// index), matching the column-by-column kernel bit for bit.
///
/// `ops` counts pushes, pops and key comparisons.
template <class T>
class MergeHeap {
public:
    struct Entry {
        index_t col;
        index_t row;
        std::uint32_t source;
        T val;
    };

    void reserve(std::size_t n) { heap_.reserve(n); }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    std::uint64_t ops() const { return ops_; }
    const Entry& top() const { return heap_.front(); }

    void push(Entry e) {
        ++ops_;
        heap_.push_back(std::move(e));
        sift_up(heap_.size() - 1);
    }

    Entry pop() {
        ++ops_;
        Entry out = std::move(heap_.front());
        if (heap_.size() > 1) {
            heap_.front() = std::move(heap_.back());
            heap_.pop_back();
            sift_down(0);
        } else {
            heap_.pop_back();
        }
        return out;
    }

private:
    bool less(const Entry& a, const Entry& b) {
        ++ops_;
        if (a.col != b.col) return a.col < b.col;
        if (a.row != b.row) return a.row < b.row;
        return a.source < b.source;
    }

    void sift_up(std::size_t i) {
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!less(heap_[i], heap_[parent])) break;
            std::swap(heap_[i], heap_[parent]);
            i = parent;
        }
    }

    void sift_down(std::size_t i) {
        const std::size_t n = heap_.size();
        for (;;) {
            const std::size_t l = 2 * i + 1;
            if (l >= n) break;
            std::size_t child = l;
            if (l + 1 < n && less(heap_[l + 1], heap_[l])) child = l + 1;
            if (!less(heap_[child], heap_[i])) break;
            std::swap(heap_[i], heap_[child]);
            i = child;
        }
    }

    std::vector<Entry> heap_;
    std::uint64_t ops_ = 0;
};

}  // namespace spgemm
