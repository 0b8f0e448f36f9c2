#include "certicos/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>

#include "json.hpp"

#include "certicos/bench.hpp"
#include "certicos/index_io.hpp"
#include "certicos/search.hpp"
#include "certicos/synth.hpp"
#include "parallel.hpp"

namespace certicos::cli {

namespace {

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

// stdout by default, a file when a path is given
class OutTarget {
  public:
    explicit OutTarget(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::trunc);
            if (!file_) throw IoError("cannot open " + path + " for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

nlohmann::json neighbors_json(const std::vector<ScoredId>& neighbors) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : neighbors) arr.push_back({{"id", s.id}, {"sim", s.sim}});
    return arr;
}

struct IndexAndVectors {
    UnitVectorSet vectors;
    Index index;
};

// The graph was built against exact float rows, so the dataset is loaded in
// validate-only mode here; silently renormalizing could detach it from the
// index and void every certificate.
IndexAndVectors load_pair(const std::string& index_path, const std::string& vectors_path) {
    IndexAndVectors iv;
    iv.vectors = load_vectors(vectors_path, /*normalize=*/false);
    iv.index = load_index(index_path);
    if (iv.index.graph.n != iv.vectors.n || iv.index.graph.d != iv.vectors.d)
        throw DataError("index was not built from this vector set (size mismatch)");
    return iv;
}

}  // namespace

std::function<void(const CertAuditRecord&)> audit_sink_from_env() {
    const char* env = std::getenv("CERTICOS_LOG");
    if (env == nullptr) return {};
    std::string value(env);
    if (value.empty() || value == "0") return {};

    struct Sink {
        std::mutex mu;
        std::ofstream file;
        bool to_stderr = false;
    };
    auto sink = std::make_shared<Sink>();
    if (value == "-" || value == "stderr" || value == "1") {
        sink->to_stderr = true;
    } else {
        sink->file.open(value, std::ios::app);
        if (!sink->file) throw IoError("CERTICOS_LOG: cannot open " + value);
    }
    return [sink](const CertAuditRecord& rec) {
        nlohmann::json j{{"event", "certificate"},
                         {"verdict", verdict_name(rec.verdict)},
                         {"mechanism", mechanism_name(rec.mechanism)},
                         {"constraints", rec.constraint_count},
                         {"cascade", rec.full_cascade},
                         {"sweeps", rec.sweeps},
                         {"lp_pivots", rec.lp_pivots}};
        std::lock_guard<std::mutex> lock(sink->mu);
        std::ostream& out = sink->to_stderr ? std::cerr : sink->file;
        out << j.dump() << '\n';
    };
}

int run_build(const BuildArgs& args) {
    return guarded([&] {
        UnitVectorSet set = load_vectors(args.vectors, args.normalize);
        KnnGraph graph = build_knng(set, args.K, args.workers);
        LshSeeder seeder = build_seeder(set, args.m, args.seed);
        save_index({std::move(graph), std::move(seeder)}, args.out);
        std::cout << "built " << args.out << ": n=" << set.n << " d=" << set.d
                  << " K=" << args.K << " m=" << args.m << " seed=" << args.seed << '\n';
        return 0;
    });
}

int run_query(const QueryArgs& args) {
    return guarded([&] {
        IndexAndVectors iv = load_pair(args.index, args.vectors);
        UnitVectorSet queries = load_vectors(args.queries, /*normalize=*/true);
        if (queries.d != iv.vectors.d) throw DataError("query dimension mismatch");
        if (args.k == 0 || args.k > iv.vectors.n)
            throw DataError("k must be in [1, n]");

        SearchParams params;
        params.cert_interval = args.cert_interval;
        params.strict_soundness = args.strict;
        params.audit = audit_sink_from_env();

        std::vector<std::string> lines(queries.n);
        detail::run_chunked(queries.n, args.workers, [&](uint64_t b, uint64_t e, unsigned) {
            for (uint64_t i = b; i < e; ++i) {
                Query q = make_query(queries.row(i), args.k, args.budget);
                QueryResult r = lookup(iv.vectors, iv.index.graph, iv.index.seeder, q, params);
                if (args.exact && !r.certified) {
                    r.neighbors = brute_force_topk(iv.vectors, queries.row(i), args.k);
                    r.mechanism = CertMechanism::LinearScan;
                }
                nlohmann::json j{{"id", i},
                                 {"neighbors", neighbors_json(r.neighbors)},
                                 {"certified", r.certified},
                                 {"expansions", r.expansions},
                                 {"micros", r.micros}};
                if (r.mechanism != CertMechanism::None)
                    j["mechanism"] = mechanism_name(r.mechanism);
                lines[i] = j.dump();
            }
        });

        OutTarget out(args.out);
        for (const auto& line : lines) out.stream() << line << '\n';
        return 0;
    });
}

int run_oracle(const OracleArgs& args) {
    return guarded([&] {
        UnitVectorSet vectors = load_vectors(args.vectors, /*normalize=*/false);
        UnitVectorSet queries = load_vectors(args.queries, /*normalize=*/true);
        if (queries.d != vectors.d) throw DataError("query dimension mismatch");
        if (args.k == 0 || args.k > vectors.n) throw DataError("k must be in [1, n]");

        std::vector<std::string> lines(queries.n);
        detail::run_chunked(queries.n, args.workers, [&](uint64_t b, uint64_t e, unsigned) {
            for (uint64_t i = b; i < e; ++i) {
                auto top = brute_force_topk(vectors, queries.row(i), args.k);
                nlohmann::json j{{"id", i}, {"neighbors", neighbors_json(top)}};
                lines[i] = j.dump();
            }
        });

        OutTarget out(args.out);
        for (const auto& line : lines) out.stream() << line << '\n';
        return 0;
    });
}

int run_bench(const BenchArgs& args) {
    return guarded([&] {
        IndexAndVectors iv = load_pair(args.index, args.vectors);
        UnitVectorSet queries =
            args.queries.empty()
                ? make_perturbed_queries(iv.vectors, args.nq, args.epsilon_min, args.epsilon_max,
                                         args.query_seed)
                : load_vectors(args.queries, /*normalize=*/true);
        if (queries.d != iv.vectors.d) throw DataError("query dimension mismatch");

        BenchConfig config;
        config.k = args.k;
        config.budgets = args.budgets;
        config.workers = args.workers;
        config.search.cert_interval = args.cert_interval;
        config.search.strict_soundness = args.strict;
        config.search.audit = audit_sink_from_env();

        BenchReport report =
            certicos::run_bench(iv.vectors, iv.index.graph, iv.index.seeder, queries, config);
        OutTarget out(args.out);
        write_summary_csv(out.stream(), report);
        if (!args.per_query_out.empty()) {
            std::ofstream pq(args.per_query_out, std::ios::trunc);
            if (!pq) throw IoError("cannot open " + args.per_query_out + " for writing");
            write_per_query_csv(pq, report);
        }
        return 0;
    });
}

int run_verify(const VerifyArgs& args) {
    return guarded([&] {
        IndexAndVectors iv = load_pair(args.index, args.vectors);
        auto violations = verify_knng(iv.vectors, iv.index.graph);
        if (violations.empty()) {
            // claim only what was checked: no non-neighbor inside any vertex ball
            std::cout << "ok: " << args.index << " ball invariant holds over " << args.vectors
                      << " (n=" << iv.vectors.n << ", K=" << iv.index.graph.K << ")\n";
            return 0;
        }
        std::cout << violations.size() << " violation(s)\n";
        uint64_t shown = 0;
        for (const auto& v : violations) {
            if (shown++ >= args.max_report) break;
            std::cout << "vertex " << v.vertex << " missing neighbor " << v.missing
                      << " (sim " << v.sim << " above radius " << iv.index.graph.radii[v.vertex]
                      << ")\n";
        }
        return 1;
    });
}

}  // namespace certicos::cli
