#include <doctest.h>

#include <array>
#include <map>
#include <set>
#include <sstream>

#include "test_util.hpp"

using namespace spgemm;
using testutil::random_matrix;
using testutil::reference_product;

namespace {

TriplesMatrix<double> rmat(int scale, std::uint64_t seed) {
    RmatParams p;
    p.scale = scale;
    p.seed = seed;
    return gen_rmat(p);
}

TriplesMatrix<double> identity(index_t n) {
    TriplesMatrix<double> t(n, n);
    for (index_t i = 0; i < n; ++i) t.push(i, i, 1.0);
    return t;
}

std::vector<ParallelOptions> schedules() {
    std::vector<ParallelOptions> out(4);
    out[1].schedule.interleave_seed = 17;
    out[2].schedule.interleave_seed = 99;
    out[3].schedule.kind = SchedulerKind::Threaded;
    return out;
}

}  // namespace

TEST_CASE("SUMMA on the identity") {
    const auto eye = identity(8);
    const GridConfig g(2, 2);
    const auto d = distribute_2d(eye, g);
    const auto r = sparse_summa(d, d, PlusTimes<double>{});
    CHECK(reassemble(r.c) == eye);
    // Only diagonal blocks hold nonzeros, so only diagonal processors work.
    CHECK(r.ledger.proc_total(g.rank(0, 0)).flops == 4);
    CHECK(r.ledger.proc_total(g.rank(1, 1)).flops == 4);
    CHECK(r.ledger.proc_total(g.rank(0, 1)).flops == 0);
    CHECK(r.ledger.proc_total(g.rank(1, 0)).flops == 0);
    CHECK(imbalance_from_ledger(r.ledger).lambda == 2.0);
}

TEST_CASE("all executors reproduce the sequential product on R-MAT scale 12") {
    const auto a = rmat(12, 1);
    const auto b = rmat(12, 2);
    const PlusTimes<double> s;
    const auto want = reference_product(a, b, s);
    const auto flops = count_flops(to_csc(a), to_csc(b));
    const auto g = GridConfig::square(16);
    const auto da = distribute_2d(a, g);
    const auto db = distribute_2d(b, g);

    const auto summa = sparse_summa(da, db, s);
    CHECK(reassemble(summa.c) == want);
    CHECK(summa.ledger.total().flops == flops);

    const auto cannon = sparse_cannon(da, db, s);
    CHECK(reassemble(cannon.c) == want);
    CHECK(cannon.ledger.total().flops == flops);

    const auto ra = distribute_1d_rows(a, 16);
    const auto rb = distribute_1d_rows(b, 16);
    for (auto mode : {MemoryMode::Streamed, MemoryMode::Replicated}) {
        const auto r = block_row_1d(ra, rb, s, mode);
        CHECK(reassemble(r.c) == want);
        CHECK(r.ledger.total().flops == flops);
    }
}

TEST_CASE("SUMMA blocking changes the stage count but not the result") {
    const auto a = rmat(10, 3);
    const auto b = rmat(10, 4);
    const PlusTimes<double> s;
    const auto g = GridConfig::square(4);
    const auto da = distribute_2d(a, g);
    const auto db = distribute_2d(b, g);
    const index_t n = a.nrows;
    std::set<int> stage_counts;
    std::optional<TriplesMatrix<double>> first;
    std::uint64_t flops = 0;
    for (index_t blocking : {index_t{0}, n / 2, n / 4, index_t{64}}) {
        ParallelOptions opt;
        opt.blocking = blocking;
        const auto r = sparse_summa(da, db, s, opt);
        const auto c = reassemble(r.c);
        if (!first) {
            first = c;
            flops = r.ledger.total().flops;
        }
        CHECK(c == *first);
        CHECK(r.ledger.total().flops == flops);
        stage_counts.insert(r.ledger.nstages);
    }
    CHECK(stage_counts == std::set<int>{2, 4, 16});
    CHECK(*first == reference_product(a, b, s));
}

TEST_CASE("SUMMA on rectangular grids and uneven dimensions") {
    const PlusTimes<double> s;
    const auto a = random_matrix(37, 53, 300, 1, s, testutil::small_int);
    const auto b = random_matrix(53, 29, 300, 2, s, testutil::small_int);
    const auto want = reference_product(a, b, s);
    for (auto [pr, pc] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 2}, std::pair{4, 5}}) {
        const GridConfig g(pr, pc);
        const auto r = sparse_summa(distribute_2d(a, g), distribute_2d(b, g), s);
        CHECK(reassemble(r.c) == want);
    }
}

TEST_CASE("Cannon on 1x1 and 3x3 grids") {
    const PlusTimes<double> s;
    const auto a = random_matrix(40, 40, 200, 5, s, testutil::unit_real);
    const auto b = random_matrix(40, 40, 200, 6, s, testutil::unit_real);
    const auto one = sparse_cannon(distribute_2d(a, GridConfig(1, 1)), distribute_2d(b, GridConfig(1, 1)), s);
    const auto direct = hypersparse_multiply(to_dcsc(a), to_dcsc(b), s);
    CHECK(one.c.blocks[0] == direct.matrix);
    CHECK(one.ledger.total().words_sent == 0);

    const auto ai = random_matrix(40, 40, 200, 5, s, testutil::small_int);
    const auto bi = random_matrix(40, 40, 200, 6, s, testutil::small_int);
    const auto three = sparse_cannon(distribute_2d(ai, GridConfig(3, 3)), distribute_2d(bi, GridConfig(3, 3)), s);
    CHECK(reassemble(three.c) == reference_product(ai, bi, s));
    CHECK_THROWS_AS(sparse_cannon(distribute_2d(ai, GridConfig(2, 3)), distribute_2d(bi, GridConfig(2, 3)), s),
                    DimensionError);
}

TEST_CASE("Cannon ledger counts the forwarded blocks") {
    const PlusTimes<double> s;
    const auto a = rmat(10, 8);
    const auto b = rmat(10, 9);
    const GridConfig g(4, 4);
    const auto da = distribute_2d(a, g);
    const auto db = distribute_2d(b, g);
    const auto r = sparse_cannon(da, db, s);
    const int q = 4;
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            const int rank = g.rank(i, j);
            std::uint64_t recv_total = 0;
            for (int t = 0; t < q; ++t) {
                const int k = (i + j + t) % q;
                const auto held = static_cast<std::uint64_t>(da.block(i, k).nnz() + db.block(k, j).nnz());
                const auto& rec = r.ledger.at(rank, t);
                if (t > 0) {
                    CHECK(rec.words_recv == held);
                    const int kp = (i + j + t - 1) % q;
                    CHECK(rec.words_sent == static_cast<std::uint64_t>(da.block(i, kp).nnz() + db.block(kp, j).nnz()));
                    CHECK(rec.messages_recv == 2);
                    recv_total += rec.words_recv;
                }
                CHECK(rec.flops == count_flops(da.block(i, k), transpose(db.block(k, j))));
            }
            // Over the shift stages a processor receives every A_ik and B_kj but its first pair.
            std::uint64_t all_but_first = 0;
            for (int k = 0; k < q; ++k) {
                if (k == (i + j) % q) continue;
                all_but_first += static_cast<std::uint64_t>(da.block(i, k).nnz() + db.block(k, j).nnz());
            }
            CHECK(recv_total == all_but_first);
        }
    }
    CHECK(r.ledger.total().words_sent == r.ledger.total().words_recv);
    const auto flops_only = cannon_flop_ledger(da, db);
    for (int rank = 0; rank < g.p(); ++rank) {
        for (int t = 0; t < q; ++t) CHECK(flops_only.at(rank, t).flops == r.ledger.at(rank, t).flops);
    }
}

TEST_CASE("1D block row traffic and modes") {
    const PlusTimes<double> s;
    const auto a = random_matrix(200, 200, 1500, 12, s, testutil::unit_real);
    const auto b = random_matrix(200, 200, 1500, 13, s, testutil::unit_real);
    // Row-wise accumulation visits k in the same order as the column kernel,
    // so results match bit for bit even with rounding.
    const auto want = reference_product(a, b, s);

    const auto one = block_row_1d(distribute_1d_rows(a, 1), distribute_1d_rows(b, 1), s, MemoryMode::Streamed);
    CHECK(reassemble(one.c) == want);

    const auto ra = distribute_1d_rows(a, 4);
    const auto rb = distribute_1d_rows(b, 4);
    const auto rep = block_row_1d(ra, rb, s, MemoryMode::Replicated);
    const auto str = block_row_1d(ra, rb, s, MemoryMode::Streamed);
    CHECK(reassemble(rep.c) == want);
    CHECK(reassemble(str.c) == want);
    CHECK(rep.ledger.nstages == 1);
    CHECK(str.ledger.nstages == 4);
    for (int r = 0; r < 4; ++r) {
        const auto expect = static_cast<std::uint64_t>(b.nnz() - rb.blocks[r].nnz());
        CHECK(rep.ledger.proc_total(r).words_recv == expect);
        CHECK(str.ledger.proc_total(r).words_recv == expect);
        CHECK(rep.ledger.proc_total(r).flops == str.ledger.proc_total(r).flops);
        // Streaming reloads partial rows every stage.
        CHECK(str.ledger.proc_total(r).spa_ops > rep.ledger.proc_total(r).spa_ops);
    }
    CHECK(rep.ledger.total().words_recv ==
          doctest::Approx(3.0 / 4.0 * static_cast<double>(b.nnz()) * 4).epsilon(0.05));
    CHECK_THROWS_AS(block_row_1d(distribute_2d(a, GridConfig(2, 2)), distribute_2d(b, GridConfig(2, 2)), s,
                                 MemoryMode::Streamed),
                    DimensionError);
}

TEST_CASE("results and ledgers do not depend on the schedule") {
    const auto a = rmat(9, 21);
    const auto b = rmat(9, 22);
    const PlusTimes<double> s;
    const auto g = GridConfig::square(9);
    const auto da = distribute_2d(a, g);
    const auto db = distribute_2d(b, g);
    const auto ra = distribute_1d_rows(a, 6);
    const auto rb = distribute_1d_rows(b, 6);

    const auto base_s = sparse_summa(da, db, s);
    const auto base_c = sparse_cannon(da, db, s);
    const auto base_1 = block_row_1d(ra, rb, s, MemoryMode::Streamed);
    for (const auto& opt : schedules()) {
        for (int rep = 0; rep < 2; ++rep) {
            const auto x = sparse_summa(da, db, s, opt);
            CHECK(x.c.blocks == base_s.c.blocks);
            CHECK(x.ledger == base_s.ledger);
            const auto y = sparse_cannon(da, db, s, opt);
            CHECK(y.c.blocks == base_c.c.blocks);
            CHECK(y.ledger == base_c.ledger);
            const auto z = block_row_1d(ra, rb, s, MemoryMode::Streamed, opt);
            CHECK(z.c.blocks == base_1.c.blocks);
            CHECK(z.ledger == base_1.ledger);
        }
    }
}

TEST_CASE("tropical and boolean products in parallel") {
    const auto g = GridConfig::square(4);
    {
        const MinPlus<double> s;
        const auto a = random_matrix(64, 64, 300, 31, s, testutil::tropical_weight);
        const auto b = random_matrix(64, 64, 300, 32, s, testutil::tropical_weight);
        const auto want = reference_product(a, b, s);
        CHECK(reassemble(sparse_summa(distribute_2d(a, g), distribute_2d(b, g), s).c) == want);
        CHECK(reassemble(sparse_cannon(distribute_2d(a, g), distribute_2d(b, g), s).c) == want);
        CHECK(reassemble(block_row_1d(distribute_1d_rows(a, 3), distribute_1d_rows(b, 3), s, MemoryMode::Streamed).c) ==
              want);
    }
    {
        const OrAnd s;
        const auto a = random_matrix(64, 64, 300, 33, s, testutil::one_byte);
        const auto b = random_matrix(64, 64, 300, 34, s, testutil::one_byte);
        const auto want = reference_product(a, b, s);
        CHECK(reassemble(sparse_summa(distribute_2d(a, g), distribute_2d(b, g), s).c) == want);
        CHECK(reassemble(sparse_cannon(distribute_2d(a, g), distribute_2d(b, g), s).c) == want);
        CHECK(reassemble(block_row_1d(distribute_1d_rows(a, 3), distribute_1d_rows(b, 3), s, MemoryMode::Replicated).c) ==
              want);
    }
}

TEST_CASE("lazy merging threshold does not change the result") {
    const PlusTimes<double> s;
    const auto a = rmat(9, 41);
    const auto b = rmat(9, 42);
    const auto g = GridConfig::square(16);
    const auto da = distribute_2d(a, g);
    const auto db = distribute_2d(b, g);
    const auto want = reassemble(sparse_summa(da, db, s).c);
    for (double f : {0.0, 1.0, 1e9}) {
        ParallelOptions opt;
        opt.merge_factor = f;
        CHECK(reassemble(sparse_summa(da, db, s, opt).c) == want);
        CHECK(reassemble(sparse_cannon(da, db, s, opt).c) == want);
    }
}

TEST_CASE("a failing processor aborts the threaded runtime") {
    Mailboxes<int> net;
    ScheduleOptions opt;
    opt.kind = SchedulerKind::Threaded;
    auto send = [&](int, int) {};
    auto compute = [&](int p, int t) {
        if (p == 0) throw std::runtime_error("boom");
        net.take({p, 0, t, 0}, true);  // never posted
    };
    CHECK_THROWS_WITH_AS(run_stages(4, 2, opt, send, compute, [&] { net.abort(); }), "boom", std::runtime_error);
    CHECK_THROWS_AS(net.take({1, 0, 0, 0}, false), std::logic_error);
}

TEST_CASE("imbalance on trivial and uniform inputs") {
    const auto a = rmat(8, 1);
    const auto single = imbalance_study(a, a, GridConfig(1, 1), 3, 5);
    CHECK(single.median.lambda == 1.0);

    const index_t n = index_t{1} << 14;
    const auto er = gen_erdos_renyi(n, 8 * n, 3);
    const auto er2 = gen_erdos_renyi(n, 8 * n, 4);
    const auto study = imbalance_study(er, er2, GridConfig::square(256), 3, 9);
    CHECK(study.median.lambda >= 1.0);
    CHECK(study.median.lambda < 1.15);
    CHECK(study.trial_lambda.size() == 3);
    CHECK(study.median.total_flops == count_flops(to_csc(er), to_csc(er2)));
    // The reported trial is the median one.
    auto sorted = study.trial_lambda;
    std::sort(sorted.begin(), sorted.end());
    CHECK(study.median.lambda == sorted[1]);
    CHECK(study.trial_lambda[static_cast<std::size_t>(study.median_trial)] == sorted[1]);

    CHECK(imbalance_study(er, er2, GridConfig::square(16), 2, 1).trial_lambda ==
          imbalance_study(er, er2, GridConfig::square(16), 2, 1).trial_lambda);
}

TEST_CASE("per-stage imbalance exceeds overall imbalance on skewed inputs") {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto a = rmat(12, seed);
        const auto b = rmat(12, seed + 1000);
        const auto st = imbalance_study(a, b, GridConfig::square(64), 1, seed);
        wins += st.median.mean_stage_lambda > st.median.lambda;
    }
    CHECK(wins >= 9);
}

TEST_CASE("imbalance report from a handmade ledger") {
    StageLedger l(GridConfig(1, 2), 2);
    l.at(0, 0).flops = 6;
    l.at(1, 0).flops = 2;
    l.at(0, 1).flops = 0;
    l.at(1, 1).flops = 4;
    const auto r = imbalance_from_ledger(l);
    CHECK(r.total_flops == 12);
    CHECK(r.lambda == 1.0);
    REQUIRE(r.stage_lambda.size() == 2);
    CHECK(r.stage_lambda[0] == 1.5);
    CHECK(r.stage_lambda[1] == 2.0);
    CHECK(r.mean_stage_lambda == 1.75);
    CHECK(max_over_mean({0, 0}) == 1.0);
    CHECK(max_over_mean({1, 3}) == 1.5);
}

TEST_CASE("ledger CSV export") {
    const PlusTimes<double> s;
    const auto a = rmat(8, 2);
    const auto g = GridConfig::square(4);
    const auto r = sparse_cannon(distribute_2d(a, g), distribute_2d(a, g), s);
    std::ostringstream out;
    write_ledger_csv(out, r.ledger);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "proc_i,proc_j,stage,flops,adds,words_sent,words_recv");
    int rows = 0, align = 0;
    std::uint64_t flops = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream f(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(f, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 7);
        align += cells[2] == "-1";
        flops += std::stoull(cells[3]);
    }
    CHECK(rows == 4 + 4 * 2);
    CHECK(align == 4);
    CHECK(flops == r.ledger.total().flops);
}

TEST_CASE("split prefetch plan") {
    for (int q = 1; q <= 8; ++q) {
        const auto plan = split_prefetch_schedule(GridConfig(q, q));
        REQUIRE(plan.stages.size() == static_cast<std::size_t>(2 * q));
        CHECK_FALSE(plan.stages.back().fetch.has_value());

        // Every half block is fetched exactly once, one stage before its use.
        std::vector<HalfBlock> fetched{plan.prologue};
        for (const auto& st : plan.stages)
            if (st.fetch) fetched.push_back(*st.fetch);
        CHECK(fetched.size() == static_cast<std::size_t>(2 * q));
        for (std::size_t t = 0; t < plan.stages.size(); ++t) CHECK(plan.stages[t].multiply == fetched[t]);

        // Each (i, k, j) is multiplied once per half.
        std::map<std::array<int, 4>, int> seen;
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j)
                for (int t = 0; t < 2 * q; ++t) {
                    const auto tr = plan.triple(i, j, t);
                    ++seen[{tr[0], tr[1], tr[2], plan.stages[static_cast<std::size_t>(t)].multiply.half}];
                }
        CHECK(seen.size() == static_cast<std::size_t>(2 * q * q * q));
        for (const auto& [key, count] : seen) CHECK(count == 1);
    }
    CHECK_THROWS_AS(split_prefetch_schedule(GridConfig(2, 3)), DimensionError);
}
