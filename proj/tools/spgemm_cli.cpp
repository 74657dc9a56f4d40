// spgemm-cli: generate matrices, multiply them, simulate parallel runs and
// evaluate the cost model. Run with --help for the subcommands.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spgemm/spgemm.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace spgemm;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kParse = 2, kDimension = 3, kIo = 4 };

void log_config(const json& cfg) { std::cerr << "config " << cfg.dump() << '\n'; }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

template <class N>
N to_number(const std::string& tok, const std::string& what) {
    N v{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) throw ParseError("bad " + what + " '" + tok + "'", 0);
    return v;
}

// ---------------------------------------------------------------------------
// Matrix sources: a .mtx path or a generator spec
//   rmat:SCALE[:SEED]  er:N:NNZ[:SEED]  grid3d:K  perm:N[:SEED]
// ---------------------------------------------------------------------------

bool is_generator_spec(const std::string& src) {
    for (const char* kind : {"rmat:", "er:", "grid3d:", "perm:"}) {
        if (src.starts_with(kind)) return true;
    }
    return false;
}

TriplesMatrix<double> load_source(const std::string& src, std::uint64_t default_seed) {
    if (!is_generator_spec(src)) {
        auto t = read_matrix_market(fs::path(src));
        normalize(t, PlusTimes<double>{});
        return t;
    }
    const auto parts = split(src, ':');
    const auto& kind = parts[0];
    auto seed_at = [&](std::size_t i) {
        return parts.size() > i ? to_number<std::uint64_t>(parts[i], "seed") : default_seed;
    };
    if (kind == "rmat" && (parts.size() == 2 || parts.size() == 3)) {
        RmatParams p;
        p.scale = to_number<int>(parts[1], "scale");
        p.seed = seed_at(2);
        return gen_rmat(p);
    }
    if (kind == "er" && (parts.size() == 3 || parts.size() == 4)) {
        return gen_erdos_renyi(to_number<index_t>(parts[1], "n"), to_number<index_t>(parts[2], "nnz"), seed_at(3));
    }
    if (kind == "grid3d" && parts.size() == 2) return gen_grid3d(to_number<index_t>(parts[1], "k"));
    if (kind == "perm" && (parts.size() == 2 || parts.size() == 3)) {
        return permutation_matrix(random_permutation(to_number<index_t>(parts[1], "n"), seed_at(2)));
    }
    throw ParseError("bad matrix source '" + src + "'", 0);
}

void check_readable(const std::string& src) {
    if (is_generator_spec(src)) return;
    std::ifstream in(src);
    if (!in) throw IoError("cannot open '" + src + "' for reading");
}

void check_writable(const std::string& path) {
    if (path.empty() || path == "-") return;
    const auto dir = fs::path(path).parent_path();
    if (!dir.empty() && !fs::is_directory(dir)) throw IoError("output directory '" + dir.string() + "' does not exist");
}

/// Runs `body(out)` against stdout for "-" or an opened file.
template <class F>
void with_output(const std::string& path, F&& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    body(out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

GridConfig parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw ParseError("grid must look like RxC, got '" + s + "'", 0);
    return GridConfig(to_number<int>(s.substr(0, x), "grid rows"), to_number<int>(s.substr(x + 1), "grid cols"));
}

// ---------------------------------------------------------------------------
// Semiring dispatch
// ---------------------------------------------------------------------------

/// Calls f(semiring, to_scalar, from_scalar) for the named semiring.
template <class F>
void with_semiring(const std::string& name, F&& f) {
    if (name == "real") {
        f(PlusTimes<double>{}, [](double v) { return v; }, [](double v) { return v; });
    } else if (name == "tropical") {
        f(MinPlus<double>{}, [](double v) { return v; }, [](double v) { return v; });
    } else if (name == "boolean") {
        f(OrAnd{}, [](double v) -> std::uint8_t { return v != 0 ? 1 : 0; },
          [](std::uint8_t v) { return static_cast<double>(v); });
    } else {
        throw ParseError("unknown semiring '" + name + "'", 0);
    }
}

template <Semiring S, class To>
TriplesMatrix<scalar_t<S>> convert_in(const TriplesMatrix<double>& t, const S& s, To&& to) {
    auto out = map_values<scalar_t<S>>(t, to);
    normalize(out, s);
    return out;
}

template <class T, class From>
TriplesMatrix<double> convert_out(const TriplesMatrix<T>& t, From&& from) {
    return map_values<double>(t, from);
}

void write_mtx(const std::string& path, const TriplesMatrix<double>& t) {
    with_output(path, [&](std::ostream& out) { write_matrix_market(out, t); });
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct GenerateOpts {
    std::string kind;
    int scale = 10;
    double degree = 8;
    index_t n = 0;
    index_t nnz = 0;
    index_t k = 2;
};

void cmd_generate(const GenerateOpts& o, std::uint64_t seed, const std::string& out) {
    check_writable(out);
    json cfg = {{"command", "generate"}, {"kind", o.kind}, {"seed", seed}, {"out", out}};
    TriplesMatrix<double> t;
    if (o.kind == "rmat") {
        RmatParams p;
        p.scale = o.scale;
        p.avg_degree = o.degree;
        p.seed = seed;
        cfg["scale"] = o.scale;
        cfg["degree"] = o.degree;
        log_config(cfg);
        t = gen_rmat(p);
    } else if (o.kind == "er") {
        cfg["n"] = o.n;
        cfg["nnz"] = o.nnz;
        log_config(cfg);
        t = gen_erdos_renyi(o.n, o.nnz, seed);
    } else if (o.kind == "grid3d") {
        cfg["k"] = o.k;
        log_config(cfg);
        t = gen_grid3d(o.k);
    } else {
        cfg["n"] = o.n;
        log_config(cfg);
        t = permutation_matrix(random_permutation(o.n, seed));
    }
    write_mtx(out, t);
    std::cerr << "wrote " << t.nrows << "x" << t.ncols << " nnz=" << t.nnz() << '\n';
}

struct MultiplyOpts {
    std::string a, b, kernel = "hypersparse", semiring = "real";
};

void cmd_multiply(const MultiplyOpts& o, std::uint64_t seed, const std::string& out) {
    check_readable(o.a);
    check_readable(o.b);
    check_writable(out);
    log_config({{"command", "multiply"}, {"a", o.a}, {"b", o.b}, {"kernel", o.kernel}, {"semiring", o.semiring},
                {"seed", seed}, {"out", out}});
    const auto a = load_source(o.a, seed);
    const auto b = load_source(o.b, seed + 1);
    with_semiring(o.semiring, [&](const auto& s, auto to, auto from) {
        const auto ta = convert_in(a, s, to);
        const auto tb = convert_in(b, s, to);
        if (ta.ncols != tb.nrows) {
            throw DimensionError("A is " + std::to_string(ta.nrows) + "x" + std::to_string(ta.ncols) + ", B is " +
                                 std::to_string(tb.nrows) + "x" + std::to_string(tb.ncols));
        }
        KernelCounters k;
        TriplesMatrix<double> c;
        if (o.kernel == "classical") {
            auto r = gustavson_spgemm(to_csc(ta), to_csc(tb), s);
            k = r.counters;
            c = convert_out(to_triples(r.matrix), from);
        } else {
            auto r = hypersparse_spgemm(to_dcsc(ta), transpose(to_dcsc(tb)), s);
            k = r.counters;
            c = convert_out(to_triples(r.matrix), from);
        }
        write_mtx(out, c);
        std::cerr << "flops=" << k.multiplications << " additions=" << k.additions << " nnz=" << c.nnz()
                  << " heap_ops=" << k.heap_ops << " isect_scans=" << k.isect_scans
                  << " column_scans=" << k.column_scans << '\n';
    });
}

struct SimulateOpts {
    std::string a, b, grid = "2x2", algo = "summa", semiring = "real", memory = "replicated",
                scheduler = "sequential", ledger;
    index_t blocking = 0;
    double merge_factor = 4.0;
};

void cmd_simulate(const SimulateOpts& o, std::uint64_t seed, const std::string& out) {
    check_readable(o.a);
    check_readable(o.b);
    check_writable(out);
    check_writable(o.ledger);
    const auto grid = parse_grid(o.grid);
    log_config({{"command", "simulate"}, {"a", o.a}, {"b", o.b}, {"grid", o.grid}, {"algo", o.algo},
                {"semiring", o.semiring}, {"blocking", o.blocking}, {"memory", o.memory},
                {"scheduler", o.scheduler}, {"merge_factor", o.merge_factor}, {"seed", seed}, {"out", out},
                {"ledger", o.ledger}});
    const auto a = load_source(o.a, seed);
    const auto b = load_source(o.b, seed + 1);

    ParallelOptions popt;
    popt.blocking = o.blocking;
    popt.merge_factor = o.merge_factor;
    popt.schedule.kind = o.scheduler == "threaded" ? SchedulerKind::Threaded : SchedulerKind::Sequential;

    with_semiring(o.semiring, [&](const auto& s, auto to, auto from) {
        using V = scalar_t<std::decay_t<decltype(s)>>;
        const auto ta = convert_in(a, s, to);
        const auto tb = convert_in(b, s, to);
        if (ta.ncols != tb.nrows) throw DimensionError("inner dimensions differ");
        ParallelResult<V> r;
        if (o.algo == "1d") {
            const int p = grid.p();
            const auto mode = o.memory == "streamed" ? MemoryMode::Streamed : MemoryMode::Replicated;
            r = block_row_1d(distribute_1d_rows(ta, p), distribute_1d_rows(tb, p), s, mode, popt);
        } else if (o.algo == "cannon") {
            r = sparse_cannon(distribute_2d(ta, grid), distribute_2d(tb, grid), s, popt);
        } else {
            r = sparse_summa(distribute_2d(ta, grid), distribute_2d(tb, grid), s, popt);
        }
        if (!out.empty()) write_mtx(out, convert_out(reassemble(r.c), from));
        if (!o.ledger.empty()) with_output(o.ledger, [&](std::ostream& os) { write_ledger_csv(os, r.ledger); });
        const auto tot = r.ledger.total();
        const auto imb = imbalance_from_ledger(r.ledger);
        std::cerr << "stages=" << r.ledger.nstages << " flops=" << tot.flops << " adds=" << tot.adds
                  << " words=" << tot.words_recv << " messages=" << tot.messages_recv << " lambda=" << imb.lambda
                  << " mean_stage_lambda=" << imb.mean_stage_lambda << " nnz=" << r.c.nnz() << '\n';
    });
}

struct ModelOpts {
    std::vector<int> scales{17, 18, 19, 20, 21, 22, 23, 24};
    double c = 8;
    int pmax = 4096;
    PerfParams pp;
    double bandwidth = 0;  // GB/s; 0 keeps beta
    double word_bytes = 8;
};

void cmd_model(ModelOpts o, const std::string& out) {
    check_writable(out);
    if (o.bandwidth > 0) o.pp.beta = PerfParams::beta_from_bandwidth(o.bandwidth, o.word_bytes);
    o.pp.validate();
    log_config({{"command", "model"}, {"scales", o.scales}, {"c", o.c}, {"pmax", o.pmax},
                {"gamma_classical", o.pp.gamma_classical}, {"gamma_hypersparse", o.pp.gamma_hypersparse},
                {"alpha", o.pp.alpha}, {"beta", o.pp.beta}, {"summa_lg_p", o.pp.summa_lg_p}, {"out", out}});
    with_output(out, [&](std::ostream& os) {
        write_model_csv_header(os);
        for (int e : o.scales) {
            const double n = std::ldexp(1.0, e);
            for (int p = 1; p <= o.pmax; ++p) write_model_csv_row(os, "1d", {n, o.c, double(p)}, model_1d(o.pp, {n, o.c, double(p)}));
            for (int q = 1; q * q <= o.pmax; ++q) {
                const ProblemParams prob{n, o.c, double(q * q)};
                const auto m = model_2d(o.pp, prob);
                const auto ov = model_overlap(o.pp, prob);
                write_model_csv_row(os, "2d", prob, m, ov.ratio());
            }
        }
    });
}

struct ScalingOpts {
    std::string a, b;
    std::vector<int> p_list{1, 4, 16, 64, 256, 1024};
    bool permute = false;
    bool timing = false;
};

void cmd_scaling(const ScalingOpts& o, std::uint64_t seed, const std::string& out) {
    check_readable(o.a);
    check_readable(o.b);
    check_writable(out);
    log_config({{"command", "scaling"}, {"a", o.a}, {"b", o.b}, {"p_list", o.p_list}, {"permute", o.permute},
                {"timing", o.timing}, {"seed", seed}, {"out", out}});
    auto a = load_source(o.a, seed);
    auto b = load_source(o.b, seed + 1);
    if (!o.permute && (o.a.starts_with("grid3d:") || o.b.starts_with("grid3d:"))) {
        std::cerr << "warning: grid3d operands without --permute concentrate nonzeros on diagonal blocks\n";
    }
    if (o.permute) {
        if (a.nrows != a.ncols || b.nrows != b.ncols || a.nrows != b.nrows) {
            throw DimensionError("--permute needs square operands of equal size");
        }
        const auto perm = random_permutation(a.nrows, seed);
        a = apply_sym_perm(a, perm);
        b = apply_sym_perm(b, perm);
    }
    const auto rows = simulate_kernel_scaling(a, b, o.p_list, o.timing);
    with_output(out, [&](std::ostream& os) { write_scaling_csv(os, rows, o.timing); });
}

struct ImbalanceOpts {
    std::string a, b, grid = "16x16";
    int trials = 5;
};

void cmd_imbalance(const ImbalanceOpts& o, std::uint64_t seed, const std::string& out) {
    check_readable(o.a);
    check_readable(o.b);
    check_writable(out);
    const auto grid = parse_grid(o.grid);
    log_config({{"command", "imbalance"}, {"a", o.a}, {"b", o.b}, {"grid", o.grid}, {"trials", o.trials},
                {"seed", seed}, {"out", out}});
    const auto a = load_source(o.a, seed);
    const auto b = load_source(o.b, seed + 1);
    const auto st = imbalance_study(a, b, grid, o.trials, seed);
    with_output(out, [&](std::ostream& os) {
        os << "stage,lambda\n";
        const auto old = os.precision(10);
        for (std::size_t s = 0; s < st.median.stage_lambda.size(); ++s) os << s << ',' << st.median.stage_lambda[s] << '\n';
        os.precision(old);
    });
    std::cerr << "median_trial=" << st.median_trial << " lambda=" << st.median.lambda
              << " mean_stage_lambda=" << st.median.mean_stage_lambda << " flops=" << st.median.total_flops << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse matrix-matrix multiplication toolkit"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    std::string out = "-";
    app.add_option("--seed", seed, "Random seed")->capture_default_str();

    auto add_out = [&](CLI::App* sub) { sub->add_option("-o,--out", out, "Output path ('-' for stdout)"); };
    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", seed, "Random seed"); };
    const std::vector<std::string> semirings{"real", "tropical", "boolean"};

    GenerateOpts gen;
    auto* g = app.add_subcommand("generate", "Write a generated matrix as Matrix Market");
    g->add_option("kind", gen.kind, "rmat | er | grid3d | perm")->required()->check(CLI::IsMember({"rmat", "er", "grid3d", "perm"}));
    g->add_option("--scale", gen.scale, "R-MAT scale (n = 2^scale)");
    g->add_option("--degree", gen.degree, "R-MAT average degree");
    g->add_option("--n", gen.n, "Dimension (er, perm)");
    g->add_option("--nnz", gen.nnz, "Expected nonzeros (er)");
    g->add_option("--k", gen.k, "Mesh side (grid3d)");
    add_seed(g);
    add_out(g);

    MultiplyOpts mul;
    auto* m = app.add_subcommand("multiply", "Sequential product with flops report");
    m->add_option("a", mul.a, "Left operand: .mtx path or generator spec")->required();
    m->add_option("b", mul.b, "Right operand")->required();
    m->add_option("--kernel", mul.kernel)->check(CLI::IsMember({"hypersparse", "classical"}))->capture_default_str();
    m->add_option("--semiring", mul.semiring)->check(CLI::IsMember(semirings))->capture_default_str();
    add_seed(m);
    add_out(m);

    SimulateOpts sim;
    auto* s = app.add_subcommand("simulate", "Parallel product on a simulated processor grid");
    s->add_option("a", sim.a)->required();
    s->add_option("b", sim.b)->required();
    s->add_option("--grid", sim.grid, "Processor grid RxC (1d uses R*C processors)")->capture_default_str();
    s->add_option("--algo", sim.algo)->check(CLI::IsMember({"summa", "cannon", "1d"}))->capture_default_str();
    s->add_option("--semiring", sim.semiring)->check(CLI::IsMember(semirings))->capture_default_str();
    s->add_option("--blocking", sim.blocking, "SUMMA stage width (0 = whole blocks)")->capture_default_str();
    s->add_option("--memory", sim.memory, "1d mode")->check(CLI::IsMember({"streamed", "replicated"}))->capture_default_str();
    s->add_option("--scheduler", sim.scheduler)->check(CLI::IsMember({"sequential", "threaded"}))->capture_default_str();
    s->add_option("--merge-factor", sim.merge_factor)->capture_default_str();
    s->add_option("--ledger", sim.ledger, "Write the stage ledger CSV here");
    add_seed(s);
    std::string sim_out;
    s->add_option("-o,--out", sim_out, "Write the product as Matrix Market here");

    ModelOpts mod;
    auto* md = app.add_subcommand("model", "Evaluate the analytic speedup model");
    md->add_option("--scales", mod.scales, "log2 n values")->delimiter(',');
    md->add_option("--c", mod.c, "Nonzeros per column")->capture_default_str();
    md->add_option("--pmax", mod.pmax, "Largest processor count")->capture_default_str();
    md->add_option("--gamma-classical", mod.pp.gamma_classical)->capture_default_str();
    md->add_option("--gamma-hypersparse", mod.pp.gamma_hypersparse)->capture_default_str();
    md->add_option("--alpha", mod.pp.alpha, "ns per message")->capture_default_str();
    md->add_option("--beta", mod.pp.beta, "ns per word")->capture_default_str();
    md->add_option("--bandwidth", mod.bandwidth, "GB/s; overrides --beta");
    md->add_option("--word-bytes", mod.word_bytes, "Bytes per word with --bandwidth")->capture_default_str();
    md->add_flag("--summa-lgp", mod.pp.summa_lg_p, "Multiply 2D communication by lg p");
    add_out(md);

    ScalingOpts sc;
    auto* scl = app.add_subcommand("scaling", "Count block-product work of both kernels over p");
    scl->add_option("a", sc.a)->required();
    scl->add_option("b", sc.b)->required();
    scl->add_option("--p-list", sc.p_list, "Perfect-square processor counts")->delimiter(',');
    scl->add_flag("--permute", sc.permute, "Apply one random symmetric permutation to both operands");
    scl->add_flag("--timing", sc.timing, "Add wall-clock columns (not deterministic)");
    add_seed(scl);
    add_out(scl);

    ImbalanceOpts im;
    auto* imb = app.add_subcommand("imbalance", "Median-permutation load imbalance of Cannon");
    imb->add_option("a", im.a)->required();
    imb->add_option("b", im.b)->required();
    imb->add_option("--grid", im.grid)->capture_default_str();
    imb->add_option("--trials", im.trials)->check(CLI::PositiveNumber)->capture_default_str();
    add_seed(imb);
    add_out(imb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kParse;
    }

    try {
        if (*g) cmd_generate(gen, seed, out);
        else if (*m) cmd_multiply(mul, seed, out);
        else if (*s) cmd_simulate(sim, seed, sim_out);
        else if (*md) cmd_model(mod, out);
        else if (*scl) cmd_scaling(sc, seed, out);
        else if (*imb) cmd_imbalance(im, seed, out);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << '\n';
        return kDimension;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOk;
}
