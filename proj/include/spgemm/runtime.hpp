#pragma once

/*
 * Simulated processor runtime.
 *
 * An algorithm is written as two per-processor step functions, called for
 * every (proc, stage):
 *
 *   send(proc, stage)     post the messages this processor owes for the stage
 *   compute(proc, stage)  take the messages addressed to it, then do local work
 *
 * A processor only touches its own state and the mailboxes. Two schedulers
 * drive the steps:
 *
 *   Sequential  round-robin: all sends of a stage, then all computes. The
 *               processor order within each phase may be shuffled by a seed.
 *   Threaded    one std::jthread per processor running send/compute for every
 *               stage back to back; take() blocks until the message arrives.
 *
 * Mailboxes are keyed by (dest, kind, stage, src), so what a processor
 * receives never depends on arrival order.
 */

#include <algorithm>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <vector>

#include "spgemm/generators.hpp"

namespace spgemm {

enum class SchedulerKind { Sequential, Threaded };

struct ScheduleOptions {
    SchedulerKind kind = SchedulerKind::Sequential;
    // Sequential only: nonzero shuffles processor order in every phase.
    std::uint64_t interleave_seed = 0;
};

class RuntimeAborted : public std::runtime_error {
public:
    RuntimeAborted() : std::runtime_error("runtime aborted by a failing processor") {}
};

template <class Msg>
class Mailboxes {
public:
    struct Key {
        int dest;
        int kind;
        int stage;
        int src;
        auto operator<=>(const Key&) const = default;
    };

    void post(const Key& k, Msg m) {
        {
            std::lock_guard lock(mu_);
            if (!boxes_.emplace(k, std::move(m)).second) throw std::logic_error("duplicate message");
        }
        cv_.notify_all();
    }

    /// Removes and returns the message for k. With `wait` the call blocks
    /// until it is posted; otherwise a missing message is a logic error.
    Msg take(const Key& k, bool wait) {
        std::unique_lock lock(mu_);
        auto it = boxes_.find(k);
        if (it == boxes_.end()) {
            if (!wait) throw std::logic_error("message taken before it was sent");
            cv_.wait(lock, [&] { return aborted_ || (it = boxes_.find(k)) != boxes_.end(); });
            if (it == boxes_.end()) throw RuntimeAborted();
        }
        Msg m = std::move(it->second);
        boxes_.erase(it);
        return m;
    }

    void abort() {
        {
            std::lock_guard lock(mu_);
            aborted_ = true;
        }
        cv_.notify_all();
    }

    std::size_t pending() const {
        std::lock_guard lock(mu_);
        return boxes_.size();
    }

private:
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::map<Key, Msg> boxes_;
    bool aborted_ = false;
};

namespace detail {
inline std::vector<int> phase_order(int nprocs, std::uint64_t seed, std::uint64_t phase) {
    std::vector<int> order(static_cast<std::size_t>(nprocs));
    std::iota(order.begin(), order.end(), 0);
    if (seed == 0) return order;
    CounterRng rng(CounterRng::mix(seed) ^ phase);
    for (int i = nprocs - 1; i > 0; --i) std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i + 1))]);
    return order;
}
}  // namespace detail

/// Drives send/compute over nprocs x nstages. `abort` is called when a
/// threaded processor fails so that blocked peers can unwind.
template <class Send, class Compute, class Abort>
void run_stages(int nprocs, int nstages, const ScheduleOptions& opt, Send&& send, Compute&& compute, Abort&& abort) {
    if (opt.kind == SchedulerKind::Sequential) {
        for (int s = 0; s < nstages; ++s) {
            for (int p : detail::phase_order(nprocs, opt.interleave_seed, 2 * static_cast<std::uint64_t>(s))) send(p, s);
            for (int p : detail::phase_order(nprocs, opt.interleave_seed, 2 * static_cast<std::uint64_t>(s) + 1)) compute(p, s);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nprocs));
    {
        std::vector<std::jthread> threads;
        threads.reserve(static_cast<std::size_t>(nprocs));
        for (int p = 0; p < nprocs; ++p) {
            threads.emplace_back([&, p] {
                try {
                    for (int s = 0; s < nstages; ++s) {
                        send(p, s);
                        compute(p, s);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(p)] = std::current_exception();
                    abort();
                }
            });
        }
    }
    // Report the root cause rather than a peer's RuntimeAborted.
    std::exception_ptr first;
    for (auto& e : errors) {
        if (!e) continue;
        try {
            std::rethrow_exception(e);
        } catch (const RuntimeAborted&) {
            if (!first) first = e;
        } catch (...) {
            std::rethrow_exception(e);
        }
    }
    if (first) std::rethrow_exception(first);
}

}  // namespace spgemm
