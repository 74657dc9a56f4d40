#include <doctest.h>

#include <cmath>
#include <set>

#include "test_util.hpp"

using namespace spgemm;

TEST_CASE("counter rng is reproducible and position addressable") {
    CounterRng a(5), b(5);
    for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
    CounterRng c(5);
    CHECK(c.at(37) == CounterRng(5, 37).next());
    CHECK(CounterRng(6).next() != CounterRng(5).next());
    CounterRng d(9);
    for (int k = 0; k < 1000; ++k) {
        CHECK(d.below(7) < 7);
        const double u = d.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("R-MAT at scale 15 has about 8n nonzeros and a skewed degree profile") {
    RmatParams p;
    p.scale = 15;
    const auto t = gen_rmat(p);
    const index_t n = index_t{1} << 15;
    CHECK(t.nrows == n);
    CHECK(t.ncols == n);
    CHECK(is_sorted_unique(t));
    CHECK(t.nnz() <= 8 * n);
    CHECK(static_cast<double>(t.nnz()) >= 0.85 * 8.0 * static_cast<double>(n));

    double sum = 0;
    for (const auto& e : t.entries) sum += e.val;
    CHECK(sum == static_cast<double>(8 * n));  // duplicates are summed, not lost

    std::vector<index_t> deg(static_cast<std::size_t>(n), 0);
    for (const auto& e : t.entries) ++deg[static_cast<std::size_t>(e.col)];
    const auto max_deg = *std::max_element(deg.begin(), deg.end());
    const double mean = static_cast<double>(t.nnz()) / static_cast<double>(n);
    CHECK(static_cast<double>(max_deg) > 10.0 * mean);
}

TEST_CASE("R-MAT degenerate quadrant and determinism") {
    RmatParams p;
    p.scale = 1;
    p.a = 1.0;
    p.b = p.c = p.d = 0.0;
    const auto t = gen_rmat(p);
    REQUIRE(t.nnz() == 1);
    CHECK(t.entries[0].row == 0);
    CHECK(t.entries[0].col == 0);
    CHECK(t.entries[0].val == 16.0);

    RmatParams q;
    q.scale = 10;
    q.seed = 3;
    CHECK(gen_rmat(q) == gen_rmat(q));
    auto r = q;
    r.seed = 4;
    CHECK_FALSE(gen_rmat(q) == gen_rmat(r));
}

TEST_CASE("R-MAT rejects bad parameters") {
    RmatParams p;
    p.scale = 0;
    CHECK_THROWS_AS(gen_rmat(p), std::invalid_argument);
    p.scale = 4;
    p.d = 0.13;  // sums to 0.99
    CHECK_THROWS_AS(gen_rmat(p), std::invalid_argument);
    p.d = 0.14;
    p.avg_degree = -1;
    CHECK_THROWS_AS(gen_rmat(p), std::invalid_argument);
}

TEST_CASE("Erdos-Renyi column counts follow Binomial(n, q)") {
    const index_t n = 1000;
    const auto t = gen_erdos_renyi(n, 8000, 11);
    CHECK(is_sorted_unique(t));
    // Total nnz within 4 standard deviations of 8000.
    CHECK(std::abs(static_cast<double>(t.nnz()) - 8000.0) < 4.0 * std::sqrt(8000.0));

    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (const auto& e : t.entries) ++deg[static_cast<std::size_t>(e.col)];
    std::vector<double> observed(40, 0.0);
    for (int d : deg) observed[static_cast<std::size_t>(std::min(d, 39))] += 1.0;

    // Binomial pmf, bins pooled from the tails until every expected count is >= 5.
    const double q = 8000.0 / (1000.0 * 1000.0);
    std::vector<double> expected(40, 0.0);
    for (int k = 0; k < 40; ++k) {
        const double logp = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                            k * std::log(q) + (n - k) * std::log1p(-q);
        expected[static_cast<std::size_t>(k)] = static_cast<double>(n) * std::exp(logp);
    }
    std::vector<std::pair<double, double>> bins;
    double eo = 0, ee = 0;
    for (int k = 0; k < 40; ++k) {
        eo += observed[static_cast<std::size_t>(k)];
        ee += expected[static_cast<std::size_t>(k)];
        if (ee >= 5.0 && k < 39) {
            bins.emplace_back(eo, ee);
            eo = ee = 0;
        }
    }
    bins.back().first += eo;
    bins.back().second += ee;
    double chi2 = 0;
    for (auto [o, e] : bins) chi2 += (o - e) * (o - e) / e;
    const double df = static_cast<double>(bins.size() - 1);
    // Roughly the 0.999 quantile for these degrees of freedom.
    CHECK(chi2 < df + 4.5 * std::sqrt(2.0 * df));

    double mean = 0;
    for (int d : deg) mean += d;
    mean /= static_cast<double>(n);
    CHECK(mean == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("Erdos-Renyi extremes and determinism") {
    CHECK(gen_erdos_renyi(50, 0, 1).nnz() == 0);
    const auto full = gen_erdos_renyi(20, 400, 1);
    CHECK(full.nnz() == 400);
    CHECK(is_sorted_unique(full));
    CHECK(gen_erdos_renyi(300, 900, 7) == gen_erdos_renyi(300, 900, 7));
    CHECK_THROWS_AS(gen_erdos_renyi(10, 101, 1), std::invalid_argument);
}

TEST_CASE("3D grid nnz formula and symmetry") {
    for (index_t k = 2; k <= 10; ++k) {
        const auto g = gen_grid3d(k);
        CHECK(g.nrows == k * k * k);
        CHECK(g.nnz() == 7 * k * k * k - 6 * k * k);
        CHECK(is_sorted_unique(g));
        CHECK(to_dcsc(g) == transpose(to_dcsc(g)));
    }
    CHECK(gen_grid3d(2).nnz() == 32);
    const auto g3 = gen_grid3d(3);
    const index_t center = 1 + 3 * 1 + 9 * 1;
    index_t in_col = 0;
    for (const auto& e : g3.entries) in_col += e.col == center;
    CHECK(in_col == 7);
}

TEST_CASE("permutations") {
    const auto perm = random_permutation(500, 3);
    CHECK_NOTHROW(check_permutation(perm));
    CHECK(std::set<index_t>(perm.begin(), perm.end()).size() == 500);
    CHECK(perm == random_permutation(500, 3));
    CHECK_THROWS_AS(check_permutation({0, 2, 2}), StructuralError);
    CHECK_THROWS_AS(check_permutation({0, 3, 1}), StructuralError);

    const auto inv = inverse_permutation(perm);
    for (index_t i = 0; i < 500; ++i) CHECK(inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] == i);

    const auto pm = permutation_matrix(perm);
    CHECK(pm.nnz() == 500);
    std::vector<int> rows(500, 0), cols(500, 0);
    for (const auto& e : pm.entries) {
        ++rows[static_cast<std::size_t>(e.row)];
        ++cols[static_cast<std::size_t>(e.col)];
        CHECK(e.row == perm[static_cast<std::size_t>(e.col)]);
    }
    CHECK(std::all_of(rows.begin(), rows.end(), [](int c) { return c == 1; }));
    CHECK(std::all_of(cols.begin(), cols.end(), [](int c) { return c == 1; }));
}

TEST_CASE("symmetric relabeling") {
    RmatParams p;
    p.scale = 9;
    const auto a = gen_rmat(p);
    std::vector<index_t> ident(512);
    for (index_t i = 0; i < 512; ++i) ident[static_cast<std::size_t>(i)] = i;
    CHECK(apply_sym_perm(a, ident) == a);

    const auto perm = random_permutation(512, 8);
    const auto pa = apply_sym_perm(a, perm);
    CHECK(pa.nnz() == a.nnz());
    CHECK(is_sorted_unique(pa));
    CHECK(apply_sym_perm(pa, inverse_permutation(perm)) == a);

    // P A P^T computed with the kernels agrees with the relabeling.
    const PlusTimes<double> s;
    const auto pm = to_csc(permutation_matrix(perm));
    const auto pt = to_csc(to_triples(transpose(to_dcsc(permutation_matrix(perm)))));
    const auto left = gustavson_spgemm(pm, to_csc(a), s).matrix;
    const auto both = gustavson_spgemm(left, pt, s).matrix;
    CHECK(to_triples(both) == pa);

    CHECK_THROWS_AS(apply_sym_perm(a, random_permutation(10, 1)), DimensionError);
}
