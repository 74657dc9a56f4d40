#pragma once

/*
 * Parallel SpGEMM on a simulated processor grid.
 *
 *   sparse_summa    stage t covers an inner-index range [k0, k1). The grid
 *                   column owning those columns of A broadcasts them along
 *                   processor rows; the grid row owning those rows of B
 *                   broadcasts them along processor columns.
 *   sparse_cannon   skew, then sqrt(p) multiply / shift-left / shift-up stages.
 *   block_row_1d    every processor owns block rows of A, B and C and sees all
 *                   of B over p stages (streamed) or at once (replicated).
 *
 * Every local product is hypersparse_spgemm on DCSC blocks (1D uses a
 * row-wise sparse accumulator). Blocks of B are transposed once up front.
 * Partial products are buffered per processor and merged lazily once the
 * buffered nonzeros exceed merge_factor * nnz(C_ij).
 *
 * All work and traffic goes into a StageLedger. Words are nonzeros; a
 * broadcast is one message per recipient and a processor never sends to
 * itself.
 */

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "spgemm/dcsc.hpp"
#include "spgemm/generators.hpp"
#include "spgemm/grid.hpp"
#include "spgemm/kernels.hpp"
#include "spgemm/ledger.hpp"
#include "spgemm/runtime.hpp"
#include "spgemm/semiring.hpp"
#include "spgemm/spa.hpp"

namespace spgemm {

struct ParallelOptions {
    ScheduleOptions schedule;
    index_t blocking = 0;       // SUMMA stage width in inner indices; 0 = whole blocks
    double merge_factor = 4.0;  // merge once buffered nnz > merge_factor * nnz(C_ij)
};

template <class T>
struct ParallelResult {
    DistMatrix<T> c;
    StageLedger ledger;
};

/// C_ij accumulator with lazy merging of buffered partial products.
template <Semiring S>
class BlockAccumulator {
public:
    using V = scalar_t<S>;

    BlockAccumulator(index_t m, index_t n, double factor) : c_(m, n), factor_(factor) {}

    /// Buffers `piece`; returns the additions spent if this triggered a merge.
    std::uint64_t add(DcscMatrix<V> piece, const S& s) {
        if (piece.nnz() == 0) return 0;
        buffered_ += static_cast<std::size_t>(piece.nnz());
        pending_.push_back(std::move(piece));
        if (static_cast<double>(buffered_) > factor_ * static_cast<double>(c_.nnz())) return merge(s);
        return 0;
    }

    /// Merges whatever is still buffered.
    std::uint64_t finish(const S& s) { return pending_.empty() ? 0 : merge(s); }

    DcscMatrix<V> take() { return std::move(c_); }
    std::size_t merges() const { return merges_; }

private:
    std::uint64_t merge(const S& s) {
        std::vector<const DcscMatrix<V>*> parts;
        parts.reserve(pending_.size() + 1);
        if (c_.nnz() > 0) parts.push_back(&c_);
        for (const auto& p : pending_) parts.push_back(&p);
        std::uint64_t adds = 0;
        auto merged = add_matrices(std::span<const DcscMatrix<V>* const>(parts), s, &adds);
        c_ = std::move(merged);
        pending_.clear();
        buffered_ = 0;
        ++merges_;
        return adds;
    }

    DcscMatrix<V> c_;
    std::vector<DcscMatrix<V>> pending_;
    std::size_t buffered_ = 0;
    double factor_;
    std::size_t merges_ = 0;
};

namespace detail {

inline void charge_product(StageRecord& r, const KernelCounters& k) {
    r.flops += k.multiplications;
    r.adds += k.additions;
    r.heap_ops += k.heap_ops;
}

template <class T>
std::vector<DcscMatrix<T>> transpose_blocks(const DistMatrix<T>& b) {
    std::vector<DcscMatrix<T>> out;
    out.reserve(b.blocks.size());
    for (const auto& blk : b.blocks) out.push_back(transpose(blk));
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sparse SUMMA
// ---------------------------------------------------------------------------

struct SummaStage {
    index_t k0;
    index_t k1;
    int a_owner_col;  // grid column holding A(:, k0:k1)
    int b_owner_row;  // grid row holding B(k0:k1, :)
};

/// Stages for an inner dimension split pc ways on A and pr ways on B: the
/// union of both breakpoint sets, each range further cut into `blocking`-wide
/// pieces (0 keeps ranges whole).
inline std::vector<SummaStage> summa_stages(index_t inner, GridConfig g, index_t blocking) {
    std::vector<index_t> cuts;
    for (int j = 0; j <= g.pc; ++j) cuts.push_back(split_point(inner, g.pc, j));
    for (int i = 0; i <= g.pr; ++i) cuts.push_back(split_point(inner, g.pr, i));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<SummaStage> stages;
    for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
        const index_t lo = cuts[t], hi = cuts[t + 1];
        const index_t step = blocking > 0 ? blocking : hi - lo;
        for (index_t k = lo; k < hi; k += step) {
            stages.push_back({k, std::min(hi, k + step), split_owner(inner, g.pc, k), split_owner(inner, g.pr, k)});
        }
    }
    return stages;
}

template <Semiring S>
ParallelResult<scalar_t<S>> sparse_summa(const DistMatrix<scalar_t<S>>& a, const DistMatrix<scalar_t<S>>& b,
                                         const S& s, const ParallelOptions& opt = {}) {
    using V = scalar_t<S>;
    if (!(a.grid == b.grid)) throw DimensionError("sparse_summa: A and B are on different grids");
    if (a.ncols != b.nrows) throw DimensionError("sparse_summa: inner dimensions differ");
    if (opt.blocking < 0) throw std::invalid_argument("sparse_summa: negative blocking");

    const GridConfig g = a.grid;
    const int p = g.p();
    const auto stages = summa_stages(a.ncols, g, opt.blocking);
    const int nstages = static_cast<int>(stages.size());
    const bool wait = opt.schedule.kind == SchedulerKind::Threaded;

    const auto bt = detail::transpose_blocks(b);
    auto c = make_dist<V>(a.nrows, b.ncols, g);
    StageLedger ledger(g, nstages);

    struct Proc {
        DcscMatrix<V> own_a, own_b;
        std::optional<BlockAccumulator<S>> acc;
    };
    std::vector<Proc> procs(static_cast<std::size_t>(p));
    for (int r = 0; r < p; ++r) procs[r].acc.emplace(c.blocks[r].nrows, c.blocks[r].ncols, opt.merge_factor);

    enum { kA = 0, kB = 1 };
    Mailboxes<DcscMatrix<V>> net;

    auto send = [&](int rank, int t) {
        const int i = g.row_of(rank), j = g.col_of(rank);
        const auto& st = stages[static_cast<std::size_t>(t)];
        auto& rec = ledger.at(rank, t);
        auto& me = procs[static_cast<std::size_t>(rank)];
        if (j == st.a_owner_col) {
            const index_t off = a.col_start(j);
            me.own_a = column_slice(a.block(i, j), st.k0 - off, st.k1 - off);
            for (int jj = 0; jj < g.pc; ++jj) {
                if (jj == j) continue;
                net.post({g.rank(i, jj), kA, t, rank}, me.own_a);
                rec.words_sent += static_cast<std::uint64_t>(me.own_a.nnz());
                ++rec.messages_sent;
            }
        }
        if (i == st.b_owner_row) {
            const index_t off = b.row_start(i);
            me.own_b = column_slice(bt[static_cast<std::size_t>(rank)], st.k0 - off, st.k1 - off);
            for (int ii = 0; ii < g.pr; ++ii) {
                if (ii == i) continue;
                net.post({g.rank(ii, j), kB, t, rank}, me.own_b);
                rec.words_sent += static_cast<std::uint64_t>(me.own_b.nnz());
                ++rec.messages_sent;
            }
        }
    };

    auto compute = [&](int rank, int t) {
        const int i = g.row_of(rank), j = g.col_of(rank);
        const auto& st = stages[static_cast<std::size_t>(t)];
        auto& rec = ledger.at(rank, t);
        auto& me = procs[static_cast<std::size_t>(rank)];
        auto receive = [&](int kind, int src) {
            auto m = net.take({rank, kind, t, src}, wait);
            rec.words_recv += static_cast<std::uint64_t>(m.nnz());
            ++rec.messages_recv;
            return m;
        };
        DcscMatrix<V> pa = j == st.a_owner_col ? std::move(me.own_a) : receive(kA, g.rank(i, st.a_owner_col));
        DcscMatrix<V> pb = i == st.b_owner_row ? std::move(me.own_b) : receive(kB, g.rank(st.b_owner_row, j));
        auto prod = hypersparse_spgemm(pa, pb, s);
        detail::charge_product(rec, prod.counters);
        rec.adds += me.acc->add(std::move(prod.matrix), s);
        if (t + 1 == nstages) rec.adds += me.acc->finish(s);
    };

    run_stages(p, nstages, opt.schedule, send, compute, [&] { net.abort(); });
    for (int r = 0; r < p; ++r) c.blocks[r] = procs[r].acc->take();
    return {std::move(c), std::move(ledger)};
}

// ---------------------------------------------------------------------------
// Sparse Cannon
// ---------------------------------------------------------------------------

/// Stage 0 receives the skewed blocks (traffic booked in ledger.alignment);
/// stage s > 0 first receives the blocks shifted one step left (A) and up (B).
/// Processor (i, j) multiplies A_ik * B_kj with k = (i + j + s) mod q.
template <Semiring S>
ParallelResult<scalar_t<S>> sparse_cannon(const DistMatrix<scalar_t<S>>& a, const DistMatrix<scalar_t<S>>& b,
                                          const S& s, const ParallelOptions& opt = {}) {
    using V = scalar_t<S>;
    if (!(a.grid == b.grid)) throw DimensionError("sparse_cannon: A and B are on different grids");
    if (!a.grid.is_square()) throw DimensionError("sparse_cannon: grid must be square");
    if (a.ncols != b.nrows) throw DimensionError("sparse_cannon: inner dimensions differ");

    const GridConfig g = a.grid;
    const int q = g.pr, p = g.p();
    const bool wait = opt.schedule.kind == SchedulerKind::Threaded;
    auto mod = [q](int x) { return ((x % q) + q) % q; };

    auto c = make_dist<V>(a.nrows, b.ncols, g);
    StageLedger ledger(g, q);
    ledger.alignment.assign(static_cast<std::size_t>(p), {});

    struct Proc {
        DcscMatrix<V> cur_a, cur_bt;
        std::optional<BlockAccumulator<S>> acc;
    };
    std::vector<Proc> procs(static_cast<std::size_t>(p));
    {
        auto bt = detail::transpose_blocks(b);
        for (int r = 0; r < p; ++r) {
            procs[r].cur_a = a.blocks[r];
            procs[r].cur_bt = std::move(bt[r]);
            procs[r].acc.emplace(c.blocks[r].nrows, c.blocks[r].ncols, opt.merge_factor);
        }
    }

    enum { kA = 0, kB = 1 };
    Mailboxes<DcscMatrix<V>> net;

    auto send = [&](int rank, int t) {
        const int i = g.row_of(rank), j = g.col_of(rank);
        auto& me = procs[static_cast<std::size_t>(rank)];
        auto& rec = t == 0 ? ledger.alignment[static_cast<std::size_t>(rank)] : ledger.at(rank, t);
        const int a_dest = t == 0 ? g.rank(i, mod(j - i)) : g.rank(i, mod(j - 1));
        const int b_dest = t == 0 ? g.rank(mod(i - j), j) : g.rank(mod(i - 1), j);
        if (a_dest != rank) {
            rec.words_sent += static_cast<std::uint64_t>(me.cur_a.nnz());
            ++rec.messages_sent;
            net.post({a_dest, kA, t, rank}, std::move(me.cur_a));
        }
        if (b_dest != rank) {
            rec.words_sent += static_cast<std::uint64_t>(me.cur_bt.nnz());
            ++rec.messages_sent;
            net.post({b_dest, kB, t, rank}, std::move(me.cur_bt));
        }
    };

    auto compute = [&](int rank, int t) {
        const int i = g.row_of(rank), j = g.col_of(rank);
        auto& me = procs[static_cast<std::size_t>(rank)];
        auto& comm = t == 0 ? ledger.alignment[static_cast<std::size_t>(rank)] : ledger.at(rank, t);
        const int a_src = t == 0 ? g.rank(i, mod(i + j)) : g.rank(i, mod(j + 1));
        const int b_src = t == 0 ? g.rank(mod(i + j), j) : g.rank(mod(i + 1), j);
        if (a_src != rank) {
            me.cur_a = net.take({rank, kA, t, a_src}, wait);
            comm.words_recv += static_cast<std::uint64_t>(me.cur_a.nnz());
            ++comm.messages_recv;
        }
        if (b_src != rank) {
            me.cur_bt = net.take({rank, kB, t, b_src}, wait);
            comm.words_recv += static_cast<std::uint64_t>(me.cur_bt.nnz());
            ++comm.messages_recv;
        }
        auto& rec = ledger.at(rank, t);
        auto prod = hypersparse_spgemm(me.cur_a, me.cur_bt, s);
        detail::charge_product(rec, prod.counters);
        rec.adds += me.acc->add(std::move(prod.matrix), s);
        if (t + 1 == q) rec.adds += me.acc->finish(s);
    };

    run_stages(p, q, opt.schedule, send, compute, [&] { net.abort(); });
    for (int r = 0; r < p; ++r) c.blocks[r] = procs[r].acc->take();
    return {std::move(c), std::move(ledger)};
}

/// Flops-only Cannon: the ledger's flops at (proc (i, j), stage s) are
/// flops(A_ik * B_kj) with k = (i + j + s) mod q. No products are formed.
template <class T>
StageLedger cannon_flop_ledger(const DistMatrix<T>& a, const DistMatrix<T>& b) {
    if (!(a.grid == b.grid) || !a.grid.is_square()) throw DimensionError("cannon_flop_ledger: need equal square grids");
    if (a.ncols != b.nrows) throw DimensionError("cannon_flop_ledger: inner dimensions differ");
    const GridConfig g = a.grid;
    const int q = g.pr;
    const auto bt = detail::transpose_blocks(b);
    StageLedger ledger(g, q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            for (int t = 0; t < q; ++t) {
                const int k = (i + j + t) % q;
                ledger.at(g.rank(i, j), t).flops = count_flops(a.block(i, k), bt[static_cast<std::size_t>(g.rank(k, j))]);
            }
        }
    }
    return ledger;
}

// ---------------------------------------------------------------------------
// 1D block row
// ---------------------------------------------------------------------------

enum class MemoryMode { Streamed, Replicated };

/// A and B distributed as p block rows (p x 1 grids). Processor i forms
/// C_i = A_i * B one row at a time with a sparse accumulator of width
/// ncols(B).
///
/// Streamed: stage s brings block row B_s (broadcast by processor s); every
/// local row of C is loaded into the accumulator, updated with
/// A_i(r, cols of block s) * B_s and unloaded again. spa_ops charges the
/// one-time accumulator initialization, one visit per local row per stage, and
/// every load, touch and unload.
///
/// Replicated: a single stage all-gathers B, then each row is formed in one
/// pass.
template <Semiring S>
ParallelResult<scalar_t<S>> block_row_1d(const DistMatrix<scalar_t<S>>& a, const DistMatrix<scalar_t<S>>& b, const S& s,
                                         MemoryMode mode, const ParallelOptions& opt = {}) {
    using V = scalar_t<S>;
    if (a.grid.pc != 1 || !(a.grid == b.grid)) throw DimensionError("block_row_1d: operands must share a p x 1 grid");
    if (a.ncols != b.nrows) throw DimensionError("block_row_1d: inner dimensions differ");

    const int p = a.grid.pr;
    const int nstages = mode == MemoryMode::Streamed ? p : 1;
    const bool wait = opt.schedule.kind == SchedulerKind::Threaded;
    const index_t n = b.ncols;
    const V zero = s.zero();

    auto c = make_dist<V>(a.nrows, b.ncols, a.grid);
    StageLedger ledger(a.grid, nstages);

    struct Row {
        std::vector<index_t> cols;
        std::vector<V> vals;
    };
    struct Proc {
        DcscMatrix<V> at;                  // A_i transposed: column r = row r of A_i
        DcscMatrix<V> own_bt;              // B_i transposed, with aux
        std::vector<DcscMatrix<V>> pieces;  // replicated mode: all B_s transposed
        std::vector<Row> rows;              // streamed mode: partial rows of C_i
        std::optional<Spa<V>> spa;
    };
    std::vector<Proc> procs(static_cast<std::size_t>(p));
    for (int r = 0; r < p; ++r) {
        procs[r].at = transpose(a.blocks[r]);
        procs[r].own_bt = build_aux(transpose(b.blocks[r]));
    }

    Mailboxes<DcscMatrix<V>> net;

    auto send = [&](int rank, int t) {
        auto& rec = ledger.at(rank, t);
        const bool sends = mode == MemoryMode::Replicated || rank == t;
        if (!sends) return;
        const auto& mine = procs[static_cast<std::size_t>(rank)].own_bt;
        for (int d = 0; d < p; ++d) {
            if (d == rank) continue;
            net.post({d, 0, t, rank}, mine);
            rec.words_sent += static_cast<std::uint64_t>(mine.nnz());
            ++rec.messages_sent;
        }
    };

    auto fetch = [&](int rank, int t, int owner) -> DcscMatrix<V> {
        if (owner == rank) return procs[static_cast<std::size_t>(rank)].own_bt;
        auto m = net.take({rank, 0, t, owner}, wait);
        auto& rec = ledger.at(rank, t);
        rec.words_recv += static_cast<std::uint64_t>(m.nnz());
        ++rec.messages_recv;
        return m;
    };

    // Accumulates A_i(r, k) * B(k, :) for the entries of column `pos` of `at`
    // whose k lies in [k0, k1), using `piece` (B_s transposed, rows local to k0).
    auto accumulate_range = [&](Spa<V>& spa, const DcscMatrix<V>& at, std::size_t pos, const DcscMatrix<V>& piece,
                                index_t k0, index_t k1, StageRecord& rec) {
        const auto ks = at.rows_at(pos);
        const auto kv = at.vals_at(pos);
        auto first = std::lower_bound(ks.begin(), ks.end(), k0);
        for (auto it = first; it != ks.end() && *it < k1; ++it) {
            const auto bpos = piece.find_column(*it - k0);
            if (!bpos) continue;
            const auto& av = kv[static_cast<std::size_t>(it - ks.begin())];
            const auto js = piece.rows_at(*bpos);
            const auto bv = piece.vals_at(*bpos);
            for (std::size_t q = 0; q < js.size(); ++q) {
                ++rec.flops;
                ++rec.spa_ops;
                if (spa.accumulate(js[q], s.multiply(av, bv[q]), s)) ++rec.adds;
            }
        }
    };

    auto compute = [&](int rank, int t) {
        auto& me = procs[static_cast<std::size_t>(rank)];
        auto& rec = ledger.at(rank, t);
        const index_t local_rows = a.blocks[static_cast<std::size_t>(rank)].nrows;
        if (!me.spa) {
            me.spa.emplace(n);
            rec.spa_ops += static_cast<std::uint64_t>(n);
            if (mode == MemoryMode::Streamed) me.rows.resize(static_cast<std::size_t>(local_rows));
        }
        auto& spa = *me.spa;

        if (mode == MemoryMode::Streamed) {
            const auto piece = fetch(rank, t, t);
            const index_t k0 = b.row_start(t), k1 = b.row_start(t + 1);
            rec.spa_ops += static_cast<std::uint64_t>(local_rows);
            for (std::size_t pos = 0; pos < me.at.jc.size(); ++pos) {
                auto& row = me.rows[static_cast<std::size_t>(me.at.jc[pos])];
                const auto ks = me.at.rows_at(pos);
                auto first = std::lower_bound(ks.begin(), ks.end(), k0);
                if (first == ks.end() || *first >= k1) continue;
                for (std::size_t q = 0; q < row.cols.size(); ++q) spa.load(row.cols[q], row.vals[q]);
                rec.spa_ops += row.cols.size();
                accumulate_range(spa, me.at, pos, piece, k0, k1, rec);
                rec.spa_ops += spa.occupied();
                row.cols.clear();
                row.vals.clear();
                spa.unload_sorted(zero, [&](index_t j, const V& v) {
                    row.cols.push_back(j);
                    row.vals.push_back(v);
                });
            }
            if (t + 1 == nstages) {
                TriplesMatrix<V> ct(local_rows, n);
                for (index_t r = 0; r < local_rows; ++r) {
                    const auto& row = me.rows[static_cast<std::size_t>(r)];
                    for (std::size_t q = 0; q < row.cols.size(); ++q) ct.entries.push_back({r, row.cols[q], row.vals[q]});
                }
                std::sort(ct.entries.begin(), ct.entries.end(), ColumnMajorLess{});
                c.blocks[static_cast<std::size_t>(rank)] = to_dcsc(ct);
                me.rows.clear();
            }
            return;
        }

        // Replicated: gather everything, then one pass per row.
        me.pieces.clear();
        for (int o = 0; o < p; ++o) me.pieces.push_back(fetch(rank, t, o));
        TriplesMatrix<V> ct(local_rows, n);
        rec.spa_ops += static_cast<std::uint64_t>(local_rows);
        for (std::size_t pos = 0; pos < me.at.jc.size(); ++pos) {
            for (int o = 0; o < p; ++o) {
                accumulate_range(spa, me.at, pos, me.pieces[static_cast<std::size_t>(o)], b.row_start(o),
                                 b.row_start(o + 1), rec);
            }
            rec.spa_ops += spa.occupied();
            const index_t r = me.at.jc[pos];
            spa.unload_sorted(zero, [&](index_t j, const V& v) { ct.entries.push_back({r, j, v}); });
        }
        me.pieces.clear();
        std::sort(ct.entries.begin(), ct.entries.end(), ColumnMajorLess{});
        c.blocks[static_cast<std::size_t>(rank)] = to_dcsc(ct);
    };

    run_stages(p, nstages, opt.schedule, send, compute, [&] { net.abort(); });
    return {std::move(c), std::move(ledger)};
}

// ---------------------------------------------------------------------------
// Load imbalance study
// ---------------------------------------------------------------------------

struct ImbalanceStudy {
    ImbalanceReport median;            // report of the median-lambda trial
    int median_trial = 0;
    std::vector<double> trial_lambda;  // in trial order
    std::vector<double> trial_mean_stage_lambda;
};

/// Seed of trial t's permutation in imbalance_study().
inline std::uint64_t trial_seed(std::uint64_t seed, int trial) {
    return CounterRng(seed).at(static_cast<std::uint64_t>(trial));
}

/// For each trial, relabels both (square, equally sized) operands with the
/// same fresh random symmetric permutation, distributes them on g and runs
/// flops-only Cannon. Reports the trial with the median overall lambda (the
/// lower median for an even count).
template <class T>
ImbalanceStudy imbalance_study(const TriplesMatrix<T>& a, const TriplesMatrix<T>& b, GridConfig g, int trials,
                               std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("imbalance_study: trials must be >= 1");
    if (a.nrows != a.ncols || !(b.nrows == a.nrows && b.ncols == a.ncols)) {
        throw DimensionError("imbalance_study: operands must be square and of equal size");
    }
    std::vector<ImbalanceReport> reports;
    ImbalanceStudy out;
    for (int t = 0; t < trials; ++t) {
        const auto perm = random_permutation(a.nrows, trial_seed(seed, t));
        const auto da = distribute_2d(apply_sym_perm(a, perm), g);
        const auto db = distribute_2d(apply_sym_perm(b, perm), g);
        reports.push_back(imbalance_from_ledger(cannon_flop_ledger(da, db)));
        out.trial_lambda.push_back(reports.back().lambda);
        out.trial_mean_stage_lambda.push_back(reports.back().mean_stage_lambda);
    }
    std::vector<int> order(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) order[t] = t;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return reports[x].lambda < reports[y].lambda; });
    out.median_trial = order[static_cast<std::size_t>((trials - 1) / 2)];
    out.median = reports[static_cast<std::size_t>(out.median_trial)];
    return out;
}

// ---------------------------------------------------------------------------
// Split prefetch schedule
// ---------------------------------------------------------------------------

/// Half h of block index k: A_ik restricted to the h-th half of its columns
/// times B_kj restricted to the same half of its rows.
struct HalfBlock {
    int k = 0;
    int half = 0;
    friend bool operator==(const HalfBlock&, const HalfBlock&) = default;
};

struct PrefetchStage {
    HalfBlock multiply;
    std::optional<HalfBlock> fetch;  // issued while `multiply` runs
};

/// Plan shared by every processor of a square grid: a prologue fetch, then
/// 2 sqrt(p) stages that each multiply the half fetched last and fetch the
/// next one. Half blocks are visited in order (0,0), (0,1), (1,0), ...
struct PrefetchPlan {
    GridConfig grid;
    HalfBlock prologue;
    std::vector<PrefetchStage> stages;

    /// (i, k, j) multiplied by processor (i, j) at stage t.
    std::array<int, 3> triple(int i, int j, int t) const {
        return {i, stages[static_cast<std::size_t>(t)].multiply.k, j};
    }
};

inline PrefetchPlan split_prefetch_schedule(GridConfig g) {
    if (!g.is_square()) throw DimensionError("split_prefetch_schedule: grid must be square");
    const int q = g.pr;
    PrefetchPlan plan{g, {0, 0}, {}};
    for (int t = 0; t < 2 * q; ++t) {
        PrefetchStage st{{t / 2, t % 2}, std::nullopt};
        if (t + 1 < 2 * q) st.fetch = HalfBlock{(t + 1) / 2, (t + 1) % 2};
        plan.stages.push_back(st);
    }
    return plan;
}

}  // namespace spgemm
