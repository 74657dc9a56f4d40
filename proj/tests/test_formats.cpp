#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

using namespace spgemm;
using testutil::random_matrix;

namespace {

// 9x9, 1-based (6,1) (8,1) (4,7) (2,8) with values 0.1 .. 0.4.
TriplesMatrix<double> nine_by_nine() {
    TriplesMatrix<double> t(9, 9);
    t.push(5, 0, 0.1);
    t.push(7, 0, 0.2);
    t.push(3, 6, 0.3);
    t.push(1, 7, 0.4);
    return t;
}

TriplesMatrix<double> identity(index_t n) {
    TriplesMatrix<double> t(n, n);
    for (index_t i = 0; i < n; ++i) t.push(i, i, 1.0);
    return t;
}

}  // namespace

TEST_CASE("normalize sorts, folds duplicates in input order and prunes zeros") {
    TriplesMatrix<double> t(3, 3);
    t.push(2, 1, 1.0);
    t.push(0, 1, 2.0);
    t.push(2, 1, 3.0);
    t.push(1, 0, 5.0);
    t.push(1, 0, -5.0);
    normalize(t, PlusTimes<double>{});
    REQUIRE(t.nnz() == 2);
    CHECK(t.entries[0] == Triple<double>{0, 1, 2.0});
    CHECK(t.entries[1] == Triple<double>{2, 1, 4.0});
    CHECK(is_sorted_unique(t));

    TriplesMatrix<double> bad(2, 2);
    bad.push(2, 0, 1.0);
    CHECK_THROWS_AS(normalize(bad, PlusTimes<double>{}), StructuralError);
}

TEST_CASE("triples to DCSC on the 9x9 example") {
    const auto d = to_dcsc(nine_by_nine());
    CHECK(d.jc == std::vector<index_t>{0, 6, 7});
    CHECK(d.cp == std::vector<index_t>{0, 2, 3, 4});
    CHECK(d.ir == std::vector<index_t>{5, 7, 3, 1});
    CHECK(d.vals == std::vector<double>{0.1, 0.2, 0.3, 0.4});
    CHECK(d.nzc() == 3);
    CHECK(d.index_storage() == 2 * 3 + 1 + 4);
    CHECK_NOTHROW(validate(d));
}

TEST_CASE("DCSC of empty and identity matrices") {
    const auto e = to_dcsc(TriplesMatrix<double>(5, 7));
    CHECK(e.jc.empty());
    CHECK(e.cp == std::vector<index_t>{0});
    CHECK(e.ir.empty());
    CHECK(e.vals.empty());

    const auto d = to_dcsc(identity(6));
    for (index_t k = 0; k < 6; ++k) {
        CHECK(d.jc[k] == k);
        CHECK(d.cp[k] == k);
        CHECK(d.ir[k] == k);
    }
    CHECK(d.cp.back() == 6);
}

TEST_CASE("triples to DCSC rejects out-of-range and unsorted input") {
    TriplesMatrix<double> t(3, 3);
    t.push(0, 3, 1.0);
    CHECK_THROWS_AS(to_dcsc(t), StructuralError);
    TriplesMatrix<double> u(3, 3);
    u.push(0, 2, 1.0);
    u.push(0, 1, 1.0);
    CHECK_THROWS_AS(to_dcsc(u), StructuralError);
    CHECK_THROWS_AS(to_csc(u), StructuralError);
}

TEST_CASE("validate rejects broken DCSC") {
    auto d = to_dcsc(nine_by_nine());
    auto e = d;
    e.jc = {0, 7, 6};
    CHECK_THROWS_AS(validate(e), StructuralError);
    e = d;
    e.cp = {0, 2, 2, 4};
    CHECK_THROWS_AS(validate(e), StructuralError);
    e = d;
    e.ir[1] = 2;  // rows 5, 2 in column 0
    CHECK_THROWS_AS(validate(e), StructuralError);
}

TEST_CASE("DCSC to triples and back") {
    const auto d = to_dcsc(nine_by_nine());
    CHECK(to_triples(d) == nine_by_nine());
    CHECK(to_dcsc(to_triples(d)) == d);
    CHECK(to_triples(to_dcsc(TriplesMatrix<double>(4, 4))).nnz() == 0);

    const auto r = random_matrix(50, 50, 100, 11, PlusTimes<double>{}, testutil::unit_real);
    CHECK(to_triples(to_dcsc(r)) == r);
    CHECK(to_triples(to_csc(r)) == r);
    CHECK(to_dcsc(to_csc(r)) == to_dcsc(r));
    CHECK(to_csc(to_dcsc(r)) == to_csc(r));
}

TEST_CASE("aux index on the 9x9 example") {
    const auto d = build_aux(to_dcsc(nine_by_nine()));
    CHECK(d.aux_chunk == 3);
    CHECK(d.aux == std::vector<index_t>{0, 1, 1, 3});
    REQUIRE(d.find_column(6).has_value());
    CHECK(*d.find_column(6) == 1);
    CHECK(*d.find_column(7) == 2);
    CHECK(*d.find_column(0) == 0);
    CHECK_FALSE(d.find_column(4).has_value());
    CHECK_FALSE(d.find_column(8).has_value());
    CHECK_FALSE(d.find_column(9).has_value());
}

TEST_CASE("aux index on identity and empty matrices") {
    const auto d = build_aux(to_dcsc(identity(8)));
    CHECK(d.aux_chunk == 1);
    for (index_t t = 0; t < 8; ++t) CHECK(d.aux[t] == t);
    const auto e = build_aux(to_dcsc(TriplesMatrix<double>(10, 10)));
    CHECK(e.aux.empty());
    CHECK_FALSE(e.find_column(3).has_value());
}

TEST_CASE("aux lookup agrees with binary search for every column") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto t = random_matrix(40, 300, static_cast<index_t>(seed * 7), seed, PlusTimes<double>{},
                                     testutil::unit_real);
        const auto plain = to_dcsc(t);
        const auto fast = build_aux(plain);
        CHECK(fast == plain);
        for (index_t c = 0; c < t.ncols; ++c) CHECK(fast.find_column(c) == plain.find_column(c));
    }
}

TEST_CASE("transpose") {
    const auto d = to_dcsc(nine_by_nine());
    const auto t = transpose(d);
    CHECK(t.jc == std::vector<index_t>{1, 3, 5, 7});
    CHECK_NOTHROW(validate(t));
    CHECK(transpose(t) == d);

    const auto g = to_dcsc(gen_grid3d(3));
    CHECK(transpose(g) == g);

    const auto r = to_dcsc(random_matrix(30, 70, 200, 5, PlusTimes<double>{}, testutil::unit_real));
    const auto rt = transpose(r);
    CHECK(rt.nrows == 70);
    CHECK(rt.ncols == 30);
    CHECK(transpose(rt) == r);
    for (const auto& e : to_triples(r).entries) {
        const auto pos = rt.find_column(e.row);
        REQUIRE(pos.has_value());
        const auto rows = rt.rows_at(*pos);
        const auto it = std::lower_bound(rows.begin(), rows.end(), e.col);
        REQUIRE(it != rows.end());
        CHECK(*it == e.col);
        CHECK(rt.vals_at(*pos)[static_cast<std::size_t>(it - rows.begin())] == e.val);
    }
}

TEST_CASE("column slice re-indexes a column range") {
    const auto d = to_dcsc(nine_by_nine());
    const auto s = column_slice(d, 6, 9);
    CHECK(s.ncols == 3);
    CHECK(s.jc == std::vector<index_t>{0, 1});
    CHECK(s.ir == std::vector<index_t>{3, 1});
    CHECK(s.cp == std::vector<index_t>{0, 1, 2});
    CHECK(column_slice(d, 1, 6).nnz() == 0);
    CHECK(column_slice(d, 0, 9) == d);
    CHECK_THROWS_AS(column_slice(d, 5, 10), DimensionError);
}

TEST_CASE("index storage is independent of the column count") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto t = random_matrix(100, 100, 150, seed, PlusTimes<double>{}, testutil::unit_real);
        const auto d = to_dcsc(t);
        CHECK(d.index_storage() == static_cast<std::size_t>(2 * d.nzc() + 1 + d.nnz()));

        auto padded = t;
        padded.nrows *= 10;
        padded.ncols *= 10;
        const auto dp = to_dcsc(padded);
        CHECK(dp.index_storage() == d.index_storage());
        CHECK(dp.jc.size() == d.jc.size());
        CHECK(to_csc(padded).index_storage() - to_csc(t).index_storage() == static_cast<std::size_t>(9 * t.ncols));
    }
}

TEST_CASE("matrix stats") {
    const auto s = stats(to_dcsc(nine_by_nine()));
    CHECK(s.nnz == 4);
    CHECK(s.nzc == 3);
    CHECK(s.nzr == 4);
    CHECK(s.hypersparse());
    CHECK(stats(to_csc(nine_by_nine())).nzc == 3);
    CHECK_FALSE(stats(to_dcsc(identity(5))).hypersparse());
}

TEST_CASE("reading Matrix Market") {
    SUBCASE("general real") {
        std::istringstream in("%%MatrixMarket matrix coordinate real general\n% comment\n2 2 2\n1 1 1.0\n2 2 2.0\n");
        const auto t = read_matrix_market(in);
        CHECK(t.nrows == 2);
        REQUIRE(t.nnz() == 2);
        CHECK(t.entries[0] == Triple<double>{0, 0, 1.0});
        CHECK(t.entries[1] == Triple<double>{1, 1, 2.0});
    }
    SUBCASE("symmetric expands the off-diagonal entry") {
        std::istringstream in("%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 1 4\n3 1 -2.5\n");
        auto t = read_matrix_market(in);
        CHECK(t.nnz() == 3);
        normalize(t, PlusTimes<double>{});
        CHECK(t.entries[1] == Triple<double>{2, 0, -2.5});
        CHECK(t.entries[2] == Triple<double>{0, 2, -2.5});
    }
    SUBCASE("skew-symmetric negates the mirror") {
        std::istringstream in("%%MatrixMarket matrix coordinate real skew-symmetric\n2 2 1\n2 1 3\n");
        auto t = normalized(read_matrix_market(in), PlusTimes<double>{});
        CHECK(t.entries[1] == Triple<double>{0, 1, -3.0});
    }
    SUBCASE("pattern and integer fields") {
        std::istringstream p("%%MatrixMarket matrix coordinate pattern general\n2 3 1\n2 3\n");
        CHECK(read_matrix_market(p).entries[0] == Triple<double>{1, 2, 1.0});
        std::istringstream i("%%MatrixMarket matrix coordinate integer general\n2 3 1\n1 2 -7\n");
        CHECK(read_matrix_market(i).entries[0] == Triple<double>{0, 1, -7.0});
    }
}

TEST_CASE("Matrix Market errors carry line numbers") {
    auto line_of = [](const std::string& text) -> std::size_t {
        std::istringstream in(text);
        try {
            read_matrix_market(in);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 9999;
    };
    CHECK(line_of("%%MatrixMarket matrix array real general\n2 2\n") == 1);
    CHECK(line_of("hello\n") == 1);
    CHECK(line_of("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n") == 3);
    CHECK(line_of("%%MatrixMarket matrix coordinate real general\n%c\n2 2 2\n1 1 1.0\n1 x 1.0\n") == 5);
    CHECK(line_of("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1.0\n") == 3);
    CHECK(line_of("%%MatrixMarket matrix coordinate real general\n2 2\n") == 2);
    CHECK(line_of("%%MatrixMarket matrix coordinate complex general\n2 2 0\n") == 1);
    CHECK_THROWS_AS(read_matrix_market(std::filesystem::path("/nonexistent/x.mtx")), IoError);
}

TEST_CASE("Matrix Market round trip of a generated R-MAT matrix") {
    RmatParams p;
    p.scale = 8;
    p.seed = 9;
    auto t = gen_rmat(p);
    // Non-integral values exercise the shortest round-trip formatting.
    for (auto& e : t.entries) e.val = e.val / 3.0 + 1e-7 * static_cast<double>(e.row);
    std::stringstream buf;
    write_matrix_market(buf, t);
    auto back = read_matrix_market(buf);
    normalize(back, PlusTimes<double>{});
    CHECK(back == t);

    const auto path = std::filesystem::temp_directory_path() / "spgemm_roundtrip.mtx";
    write_matrix_market(path, t);
    CHECK(normalized(read_matrix_market(path), PlusTimes<double>{}) == t);
    std::filesystem::remove(path);
}
