#include "certicos/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iterator>

#include "parallel.hpp"

namespace certicos {

namespace {

double intersect_fraction(const std::vector<ScoredId>& got, const std::vector<ScoredId>& want) {
    std::vector<uint32_t> a, b;
    a.reserve(got.size());
    b.reserve(want.size());
    for (const auto& s : got) a.push_back(s.id);
    for (const auto& s : want) b.push_back(s.id);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<uint32_t> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    return want.empty() ? 1.0 : static_cast<double>(both.size()) / static_cast<double>(want.size());
}

void put(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out << buf;
}

}  // namespace

BenchReport run_bench(const UnitVectorSet& vectors, const KnnGraph& graph,
                      const LshSeeder& seeder, const UnitVectorSet& queries,
                      const BenchConfig& config) {
    if (queries.d != vectors.d) throw DataError("bench: query dimension mismatch");
    if (config.k == 0 || config.k > vectors.n) throw DataError("bench: k out of range");
    if (config.budgets.empty()) throw DataError("bench: no budgets given");

    const uint64_t nq = queries.n;
    std::vector<std::vector<ScoredId>> oracle(nq);
    detail::run_chunked(nq, config.workers, [&](uint64_t b, uint64_t e, unsigned) {
        for (uint64_t i = b; i < e; ++i)
            oracle[i] = brute_force_topk(vectors, queries.row(i), config.k);
    });

    BenchReport report;
    report.per_query.reserve(nq * config.budgets.size());
    for (uint64_t budget : config.budgets) {
        std::vector<PerQueryStat> stats(nq);
        auto t0 = std::chrono::steady_clock::now();
        detail::run_chunked(nq, config.workers, [&](uint64_t b, uint64_t e, unsigned) {
            for (uint64_t i = b; i < e; ++i) {
                Query q = make_query(queries.row(i), config.k, budget);
                QueryResult r = lookup(vectors, graph, seeder, q, config.search);
                stats[i] = {i,
                            budget,
                            1.0 - oracle[i].front().sim,
                            r.certified,
                            intersect_fraction(r.neighbors, oracle[i]),
                            r.expansions};
            }
        });
        auto t1 = std::chrono::steady_clock::now();
        double secs = std::chrono::duration<double>(t1 - t0).count();

        BudgetSummary sum{graph.K, budget, 0.0, 0.0, 0.0, 0.0};
        for (const auto& s : stats) {
            sum.recall += s.recall;
            sum.certified_fraction += s.certified ? 1.0 : 0.0;
            sum.mean_expansions += static_cast<double>(s.expansions);
        }
        sum.recall /= static_cast<double>(nq);
        sum.certified_fraction /= static_cast<double>(nq);
        sum.mean_expansions /= static_cast<double>(nq);
        sum.qps = secs > 0.0 ? static_cast<double>(nq) / secs : 0.0;
        report.summaries.push_back(sum);
        report.per_query.insert(report.per_query.end(), stats.begin(), stats.end());
    }
    return report;
}

void write_summary_csv(std::ostream& out, const BenchReport& report) {
    out << "K,budget,recall,qps,certified_fraction,mean_expansions\n";
    for (const auto& s : report.summaries) {
        out << s.K << ',' << s.budget << ',';
        put(out, s.recall);
        out << ',';
        put(out, s.qps);
        out << ',';
        put(out, s.certified_fraction);
        out << ',';
        put(out, s.mean_expansions);
        out << '\n';
    }
}

void write_per_query_csv(std::ostream& out, const BenchReport& report) {
    out << "query_id,budget,d_vstar_q,certified,recall,expansions\n";
    for (const auto& s : report.per_query) {
        out << s.query_id << ',' << s.budget << ',';
        put(out, s.d_vstar_q);
        out << ',' << (s.certified ? 1 : 0) << ',';
        put(out, s.recall);
        out << ',' << s.expansions << '\n';
    }
}

}  // namespace certicos
