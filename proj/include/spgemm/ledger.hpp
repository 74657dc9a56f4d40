#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spgemm/grid.hpp"

namespace spgemm {

/// Work and traffic of one processor in one stage. Words are nonzeros moved.
struct StageRecord {
    std::uint64_t flops = 0;
    std::uint64_t adds = 0;
    std::uint64_t words_sent = 0;
    std::uint64_t words_recv = 0;
    std::uint64_t messages_sent = 0;
    std::uint64_t messages_recv = 0;
    std::uint64_t heap_ops = 0;
    std::uint64_t spa_ops = 0;  // sparse accumulator loads, touches and initialization

    StageRecord& operator+=(const StageRecord& o);
    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

/// Per (processor, stage) records for one parallel run. Processors are
/// ranked row-major over the grid. Cannon's initial skew is kept apart from
/// the multiply stages in `alignment` (one record per processor, empty for
/// the other algorithms).
struct StageLedger {
    GridConfig grid;
    int nstages = 0;
    std::vector<StageRecord> records;
    std::vector<StageRecord> alignment;

    StageLedger() = default;
    StageLedger(GridConfig g, int stages)
        : grid(g), nstages(stages), records(static_cast<std::size_t>(g.p()) * static_cast<std::size_t>(stages)) {}

    StageRecord& at(int proc, int stage) { return records[static_cast<std::size_t>(proc) * nstages + stage]; }
    const StageRecord& at(int proc, int stage) const { return records[static_cast<std::size_t>(proc) * nstages + stage]; }

    /// Sum over stages (alignment included).
    StageRecord proc_total(int proc) const;
    /// Sum over processors and stages (alignment included).
    StageRecord total() const;

    friend bool operator==(const StageLedger&, const StageLedger&) = default;
};

/// CSV with header proc_i,proc_j,stage,flops,adds,words_sent,words_recv.
/// Alignment rows, when present, come first with stage -1.
void write_ledger_csv(std::ostream& out, const StageLedger& ledger);

struct ImbalanceReport {
    double lambda = 1.0;                 // max / mean of per-processor flops
    std::vector<double> stage_lambda;    // the same ratio within each stage
    double mean_stage_lambda = 1.0;      // mean of stage_lambda over stages that do any flops
    std::uint64_t total_flops = 0;
};

/// max/mean of the values; 1 when they sum to zero.
double max_over_mean(const std::vector<std::uint64_t>& v);

ImbalanceReport imbalance_from_ledger(const StageLedger& ledger);

}  // namespace spgemm
