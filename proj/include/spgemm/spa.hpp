#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "spgemm/common.hpp"
#include "spgemm/semiring.hpp"

namespace spgemm {

/// Sparse accumulator: dense value/flag arrays plus the list of occupied
/// slots. Allocation is O(n) once; accumulate and unload then cost O(k) in
/// the number of touched slots (plus k lg k to emit them sorted).
template <class T>
class Spa {
public:
    explicit Spa(index_t n) : values_(static_cast<std::size_t>(n)), flags_(static_cast<std::size_t>(n), 0) {}

    index_t capacity() const { return static_cast<index_t>(values_.size()); }
    std::size_t occupied() const { return slots_.size(); }

    /// Sets slot i, which must be empty. Used to load existing partial sums.
    void load(index_t i, const T& v) {
        flags_[i] = 1;
        values_[i] = v;
        slots_.push_back(i);
    }

    /// values[i] <- add(values[i], v), or values[i] <- v if the slot is empty.
    /// Returns true when an addition was performed.
    template <Semiring S>
    bool accumulate(index_t i, const T& v, const S& s) {
        if (flags_[i]) {
            values_[i] = s.add(values_[i], v);
            return true;
        }
        load(i, v);
        return false;
    }

    /// Emits occupied slots in increasing index order, skipping values equal
    /// to `zero`, then clears the accumulator.
    template <class Emit>
    void unload_sorted(const T& zero, Emit&& emit) {
        std::sort(slots_.begin(), slots_.end());
        for (auto i : slots_) {
            if (!(values_[i] == zero)) emit(i, values_[i]);
            flags_[i] = 0;
        }
        slots_.clear();
    }

private:
    std::vector<T> values_;
    std::vector<std::uint8_t> flags_;
    std::vector<index_t> slots_;
};

}  // namespace spgemm
