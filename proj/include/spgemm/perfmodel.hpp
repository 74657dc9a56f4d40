#pragma once

/*
 * alpha-beta-gamma cost model for 1D and 2D parallel SpGEMM on an n x n
 * Erdős–Rényi input with c nonzeros per row and column. Times in ns.
 *
 * Sequential work W = gamma_classical * c^2 * n.
 *
 * 1D (replicated B):
 *   t_comm = (p - 1) (alpha + beta c n / p)
 *   t_comp = gamma_classical (2n + (c n + c^2 n) / p)
 *     2n: the length-n accumulator plus the n + 1 row pointers of the
 *     assembled B, paid by every processor however large p gets.
 *
 * 2D (sqrt(p) x sqrt(p) grid, q = sqrt(p)):
 *   t_comm = q (2 alpha + beta 2 c n / p)
 *   t_mult = gamma_hyper q (2 min(1, c/q) n/q + (c^2 n / (p q)) lg ni)
 *   ni     = min(n/q, c^2 n / (p q))
 *   t_add  = gamma_hyper (c^2 n / (p q)) lg(q!)
 *   t_comp = t_mult + t_add
 *
 * speedup = W / (t_comp + t_comm), efficiency = speedup / p. p = 1 is the
 * sequential run itself: t_comm = 0 and t_comp = W.
 */

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spgemm/triples.hpp"

namespace spgemm {

struct PerfParams {
    double gamma_classical = 293.6;   // ns per flop, column-wise kernel
    double gamma_hypersparse = 19.2;  // ns per flop, hypersparse kernel
    double beta = 8.0;                // ns per word
    double alpha = 2300.0;            // ns per message
    bool summa_lg_p = false;          // multiply 2D communication by lg p

    /// beta from a link bandwidth in GB/s and a word size in bytes.
    static double beta_from_bandwidth(double gbytes_per_s, double word_bytes) { return word_bytes / gbytes_per_s; }

    /// Throws std::invalid_argument unless every constant is positive.
    void validate() const;
};

struct ProblemParams {
    double n = 1 << 20;
    double c = 8;
    double p = 1;
};

struct ModelResult {
    double t_comm = 0;
    double t_mult = 0;
    double t_add = 0;
    double t_comp = 0;
    double work = 0;
    double speedup = 1;
    double efficiency = 1;
    bool extrapolated = false;  // 2D only: p <= c^2, outside the analysed regime
};

/// log2(x!) for real x >= 0; an exact sum of log2 i for integral x.
double lg_factorial(double x);

ModelResult model_1d(const PerfParams& pp, const ProblemParams& prob);
ModelResult model_2d(const PerfParams& pp, const ProblemParams& prob);

struct OverlapResult {
    double w = 0;  // fraction of communication left exposed
    double sync_speedup = 1;
    double async_speedup = 1;
    double ratio() const { return async_speedup / sync_speedup; }
};

/// Exposed-communication fraction w = clamp(1 - t_comp / t_comm, 0, 1).
double exposed_fraction(double t_comp, double t_comm);

/// Async speedup W / (t_comp + w t_comm) for the 2D model.
OverlapResult model_overlap(const PerfParams& pp, const ProblemParams& prob);

/// CSV header: model,n,c,p,t_comm_ns,t_comp_ns,speedup,efficiency,extrapolated,overlap_ratio
void write_model_csv_header(std::ostream& out);
void write_model_csv_row(std::ostream& out, const std::string& model, const ProblemParams& prob, const ModelResult& r,
                         double overlap_ratio = -1);

// ---------------------------------------------------------------------------
// Submatrix product simulation
// ---------------------------------------------------------------------------

struct KernelTotals {
    std::uint64_t flops = 0;
    std::uint64_t additions = 0;
    std::uint64_t column_scans = 0;
    std::uint64_t heap_ops = 0;
    std::uint64_t isect_scans = 0;
    double seconds = 0;
};

struct ScalingRow {
    int p = 1;
    index_t block_dim = 0;         // n / sqrt(p), the block column count
    double nnz_per_block_dim = 0;  // mean block nnz / block_dim, A and B together
    bool hypersparse = false;      // nnz_per_block_dim < 1
    KernelTotals classical;        // column-wise kernel on CSC blocks
    KernelTotals hyper;            // hypersparse kernel on DCSC blocks

    std::uint64_t classical_work() const { return classical.flops + classical.column_scans; }
    std::uint64_t hyper_work() const { return hyper.heap_ops + hyper.isect_scans; }
};

/// For each p (a perfect square) cuts A and B on a sqrt(p) x sqrt(p) grid and
/// runs all p sqrt(p) block products A_ik * B_kj under both kernels,
/// accumulating their counters (and wall time when `timing`). Additions
/// across k and distribution are not part of the totals.
std::vector<ScalingRow> simulate_kernel_scaling(const TriplesMatrix<double>& a, const TriplesMatrix<double>& b,
                                                const std::vector<int>& p_list, bool timing = false);

/// CSV header: p,block_dim,nnz_per_block_dim,hypersparse,flops,classical_scans,
/// classical_work,hyper_heap_ops,hyper_isect_scans,hyper_work[,classical_s,hyper_s]
void write_scaling_csv(std::ostream& out, const std::vector<ScalingRow>& rows, bool timing);

}  // namespace spgemm
