#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "certicos/index_io.hpp"
#include "certicos/search.hpp"

namespace certicos {

struct BenchConfig {
    uint32_t k = 10;
    std::vector<uint64_t> budgets;
    unsigned workers = 1;
    SearchParams search;
};

struct PerQueryStat {
    uint64_t query_id;
    uint64_t budget;
    double d_vstar_q;  // 1 - best exact similarity
    bool certified;
    double recall;
    uint64_t expansions;
};

struct BudgetSummary {
    uint32_t K;
    uint64_t budget;
    double recall;
    double qps;
    double certified_fraction;
    double mean_expansions;
};

struct BenchReport {
    std::vector<BudgetSummary> summaries;
    std::vector<PerQueryStat> per_query;  // budget-major, query id minor
};

/// Runs every query at every budget against the exact brute-force answers.
/// Everything in the report except qps is deterministic.
BenchReport run_bench(const UnitVectorSet& vectors, const KnnGraph& graph,
                      const LshSeeder& seeder, const UnitVectorSet& queries,
                      const BenchConfig& config);

void write_summary_csv(std::ostream& out, const BenchReport& report);
void write_per_query_csv(std::ostream& out, const BenchReport& report);

}  // namespace certicos
