#include "spgemm/perfmodel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "spgemm/grid.hpp"
#include "spgemm/kernels.hpp"

namespace spgemm {

void PerfParams::validate() const {
    if (!(gamma_classical > 0 && gamma_hypersparse > 0 && beta > 0 && alpha > 0)) {
        throw std::invalid_argument("machine constants must be strictly positive");
    }
}

namespace {

void check_problem(const ProblemParams& prob) {
    if (!(prob.n >= 1)) throw std::invalid_argument("model: n must be >= 1");
    if (!(prob.c >= 1)) throw std::invalid_argument("model: c must be >= 1");
    if (!(prob.p >= 1)) throw std::invalid_argument("model: p must be >= 1");
}

ModelResult finish(ModelResult r, double p) {
    r.t_comp = r.t_mult + r.t_add;
    r.speedup = r.work / (r.t_comp + r.t_comm);
    r.efficiency = r.work / (p * (r.t_comp + r.t_comm));
    return r;
}

}  // namespace

double lg_factorial(double x) {
    if (x < 0) throw std::invalid_argument("lg_factorial: negative argument");
    if (x == std::floor(x) && x <= 1e6) {
        double s = 0;
        for (double i = 2; i <= x; ++i) s += std::log2(i);
        return s;
    }
    return std::lgamma(x + 1) / std::log(2.0);
}

ModelResult model_1d(const PerfParams& pp, const ProblemParams& prob) {
    pp.validate();
    check_problem(prob);
    const double n = prob.n, c = prob.c, p = prob.p;
    ModelResult r;
    r.work = pp.gamma_classical * c * c * n;
    if (p == 1) {
        r.t_mult = r.work;
        return finish(r, p);
    }
    r.t_comm = (p - 1) * (pp.alpha + pp.beta * c * n / p);
    r.t_mult = pp.gamma_classical * (2 * n + (c * n + c * c * n) / p);
    return finish(r, p);
}

ModelResult model_2d(const PerfParams& pp, const ProblemParams& prob) {
    pp.validate();
    check_problem(prob);
    const double n = prob.n, c = prob.c, p = prob.p;
    const double q = std::sqrt(p);
    ModelResult r;
    r.work = pp.gamma_classical * c * c * n;
    if (p == 1) {
        r.t_mult = r.work;
        return finish(r, p);
    }
    r.extrapolated = p <= c * c;
    const double per_block_flops = c * c * n / (p * q);
    const double ni = std::min(n / q, per_block_flops);
    r.t_comm = q * (2 * pp.alpha + pp.beta * 2 * c * n / p);
    if (pp.summa_lg_p) r.t_comm *= std::log2(p);
    r.t_mult = pp.gamma_hypersparse * q *
               (2 * std::min(1.0, c / q) * n / q + per_block_flops * std::log2(std::max(ni, 1.0)));
    r.t_add = pp.gamma_hypersparse * per_block_flops * lg_factorial(q);
    return finish(r, p);
}

double exposed_fraction(double t_comp, double t_comm) {
    if (t_comm <= 0) return 0;
    return std::clamp(1 - t_comp / t_comm, 0.0, 1.0);
}

OverlapResult model_overlap(const PerfParams& pp, const ProblemParams& prob) {
    const auto m = model_2d(pp, prob);
    OverlapResult o;
    o.w = exposed_fraction(m.t_comp, m.t_comm);
    o.sync_speedup = m.speedup;
    o.async_speedup = m.work / (m.t_comp + o.w * m.t_comm);
    return o;
}

void write_model_csv_header(std::ostream& out) {
    out << "model,n,c,p,t_comm_ns,t_comp_ns,speedup,efficiency,extrapolated,overlap_ratio\n";
}

void write_model_csv_row(std::ostream& out, const std::string& model, const ProblemParams& prob, const ModelResult& r,
                         double overlap_ratio) {
    const auto old = out.precision(10);
    out << model << ',' << static_cast<std::int64_t>(prob.n) << ',' << prob.c << ',' << static_cast<std::int64_t>(prob.p)
        << ',' << r.t_comm << ',' << r.t_comp << ',' << r.speedup << ',' << r.efficiency << ','
        << (r.extrapolated ? 1 : 0) << ',';
    if (overlap_ratio >= 0) out << overlap_ratio;
    out << '\n';
    out.precision(old);
}

std::vector<ScalingRow> simulate_kernel_scaling(const TriplesMatrix<double>& a, const TriplesMatrix<double>& b,
                                                const std::vector<int>& p_list, bool timing) {
    if (a.ncols != b.nrows) throw DimensionError("simulate_kernel_scaling: inner dimensions differ");
    using clock = std::chrono::steady_clock;
    const PlusTimes<double> s;
    std::vector<ScalingRow> rows;
    for (int p : p_list) {
        const auto g = GridConfig::square(p);
        const int q = g.pr;
        const auto da = distribute_2d(a, g);
        const auto db = distribute_2d(b, g);

        ScalingRow row;
        row.p = p;
        row.block_dim = split_point(a.ncols, q, 1);
        row.nnz_per_block_dim = row.block_dim > 0 ? static_cast<double>(a.nnz() + b.nnz()) / (2.0 * p) /
                                                        static_cast<double>(row.block_dim)
                                                  : 0.0;
        row.hypersparse = row.nnz_per_block_dim < 1.0;

        // Block format conversions are setup, outside the measured products.
        std::vector<CscMatrix<double>> a_csc, b_csc;
        std::vector<DcscMatrix<double>> b_t;
        for (const auto& blk : da.blocks) a_csc.push_back(to_csc(blk));
        for (const auto& blk : db.blocks) {
            b_csc.push_back(to_csc(blk));
            b_t.push_back(transpose(blk));
        }

        for (int i = 0; i < q; ++i) {
            for (int j = 0; j < q; ++j) {
                for (int k = 0; k < q; ++k) {
                    const auto ra = static_cast<std::size_t>(g.rank(i, k));
                    const auto rb = static_cast<std::size_t>(g.rank(k, j));

                    auto t0 = timing ? clock::now() : clock::time_point{};
                    const auto cl = gustavson_spgemm(a_csc[ra], b_csc[rb], s);
                    if (timing) row.classical.seconds += std::chrono::duration<double>(clock::now() - t0).count();
                    row.classical.flops += cl.counters.multiplications;
                    row.classical.additions += cl.counters.additions;
                    row.classical.column_scans += cl.counters.column_scans;

                    t0 = timing ? clock::now() : clock::time_point{};
                    const auto hy = hypersparse_spgemm(da.blocks[ra], b_t[rb], s);
                    if (timing) row.hyper.seconds += std::chrono::duration<double>(clock::now() - t0).count();
                    row.hyper.flops += hy.counters.multiplications;
                    row.hyper.additions += hy.counters.additions;
                    row.hyper.heap_ops += hy.counters.heap_ops;
                    row.hyper.isect_scans += hy.counters.isect_scans;
                }
            }
        }
        rows.push_back(row);
    }
    return rows;
}

void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows, bool timing) {
    out << "p,block_dim,nnz_per_block_dim,hypersparse,flops,classical_scans,classical_work,hyper_heap_ops,"
           "hyper_isect_scans,hyper_work";
    if (timing) out << ",classical_s,hyper_s";
    out << '\n';
    const auto old = out.precision(10);
    for (const auto& r : rows) {
        out << r.p << ',' << r.block_dim << ',' << r.nnz_per_block_dim << ',' << (r.hypersparse ? 1 : 0) << ','
            << r.classical.flops << ',' << r.classical.column_scans << ',' << r.classical_work() << ','
            << r.hyper.heap_ops << ',' << r.hyper.isect_scans << ',' << r.hyper_work();
        if (timing) out << ',' << r.classical.seconds << ',' << r.hyper.seconds;
        out << '\n';
    }
    out.precision(old);
}

}  // namespace spgemm
