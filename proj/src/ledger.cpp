#include "spgemm/ledger.hpp"

#include <algorithm>
#include <ostream>

namespace spgemm {

StageRecord& StageRecord::operator+=(const StageRecord& o) {
    flops += o.flops;
    adds += o.adds;
    words_sent += o.words_sent;
    words_recv += o.words_recv;
    messages_sent += o.messages_sent;
    messages_recv += o.messages_recv;
    heap_ops += o.heap_ops;
    spa_ops += o.spa_ops;
    return *this;
}

StageRecord StageLedger::proc_total(int proc) const {
    StageRecord t;
    if (!alignment.empty()) t += alignment[static_cast<std::size_t>(proc)];
    for (int s = 0; s < nstages; ++s) t += at(proc, s);
    return t;
}

StageRecord StageLedger::total() const {
    StageRecord t;
    for (const auto& r : alignment) t += r;
    for (const auto& r : records) t += r;
    return t;
}

void write_ledger_csv(std::ostream& out, const StageLedger& ledger) {
    out << "proc_i,proc_j,stage,flops,adds,words_sent,words_recv\n";
    auto row = [&](int proc, int stage, const StageRecord& r) {
        out << ledger.grid.row_of(proc) << ',' << ledger.grid.col_of(proc) << ',' << stage << ',' << r.flops << ','
            << r.adds << ',' << r.words_sent << ',' << r.words_recv << '\n';
    };
    for (std::size_t p = 0; p < ledger.alignment.size(); ++p) row(static_cast<int>(p), -1, ledger.alignment[p]);
    for (int p = 0; p < ledger.grid.p(); ++p) {
        for (int s = 0; s < ledger.nstages; ++s) row(p, s, ledger.at(p, s));
    }
}

double max_over_mean(const std::vector<std::uint64_t>& v) {
    if (v.empty()) return 1.0;
    std::uint64_t sum = 0, mx = 0;
    for (auto x : v) {
        sum += x;
        mx = std::max(mx, x);
    }
    if (sum == 0) return 1.0;
    return static_cast<double>(mx) * static_cast<double>(v.size()) / static_cast<double>(sum);
}

ImbalanceReport imbalance_from_ledger(const StageLedger& ledger) {
    ImbalanceReport rep;
    const int p = ledger.grid.p();
    std::vector<std::uint64_t> per_proc(static_cast<std::size_t>(p), 0);
    for (int q = 0; q < p; ++q) per_proc[q] = ledger.proc_total(q).flops;
    rep.lambda = max_over_mean(per_proc);
    for (auto f : per_proc) rep.total_flops += f;

    double sum = 0;
    int active = 0;
    std::vector<std::uint64_t> stage(static_cast<std::size_t>(p));
    for (int s = 0; s < ledger.nstages; ++s) {
        bool any = false;
        for (int q = 0; q < p; ++q) {
            stage[q] = ledger.at(q, s).flops;
            any = any || stage[q] > 0;
        }
        const double l = max_over_mean(stage);
        rep.stage_lambda.push_back(l);
        if (any) {
            sum += l;
            ++active;
        }
    }
    rep.mean_stage_lambda = active ? sum / active : 1.0;
    return rep;
}

}  // namespace spgemm
