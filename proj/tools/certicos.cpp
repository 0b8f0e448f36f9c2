#include "CLI11.hpp"

#include "certicos/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"certicos: exact cosine nearest-neighbor search with certificates"};
    app.require_subcommand(1);

    certicos::cli::BuildArgs build;
    auto* b = app.add_subcommand("build", "build a K-NN graph index over a C2VD vector set");
    b->add_option("--vectors", build.vectors, "input C2VD file")->required();
    b->add_option("--out", build.out, "output C2IX index path")->required();
    b->add_option("--K", build.K, "neighbors per vertex");
    b->add_option("--m", build.m, "LSH hyperplanes (1..24)");
    b->add_option("--seed", build.seed, "LSH rng seed");
    b->add_option("--workers", build.workers, "threads (0 = all cores)");
    b->add_flag("--no-normalize{false}", build.normalize,
                "reject rows off unit norm instead of normalizing");

    certicos::cli::QueryArgs query;
    auto* q = app.add_subcommand("query", "answer top-k queries from an index");
    q->add_option("--index", query.index, "C2IX index")->required();
    q->add_option("--vectors", query.vectors, "C2VD dataset the index was built from")->required();
    q->add_option("--queries", query.queries, "C2VD query vectors")->required();
    q->add_option("--out", query.out, "output JSONL path (default stdout)");
    q->add_option("--k", query.k, "neighbors to return");
    q->add_option("--budget", query.budget, "expansion budget per query");
    q->add_flag("--exact", query.exact, "linear-scan fallback for uncertified queries");
    q->add_flag("--strict", query.strict, "only LP-confirmed emptiness certifies");
    q->add_option("--cert-interval", query.cert_interval,
                  "run the full certificate cascade every Nth completion");
    q->add_option("--workers", query.workers, "threads");

    certicos::cli::OracleArgs oracle;
    auto* o = app.add_subcommand("oracle", "exact top-k by brute force");
    o->add_option("--vectors", oracle.vectors, "C2VD dataset")->required();
    o->add_option("--queries", oracle.queries, "C2VD query vectors")->required();
    o->add_option("--out", oracle.out, "output JSONL path (default stdout)");
    o->add_option("--k", oracle.k, "neighbors to return");
    o->add_option("--workers", oracle.workers, "threads");

    certicos::cli::BenchArgs bench;
    auto* e = app.add_subcommand("bench", "recall/qps/certification sweep over budgets");
    e->add_option("--index", bench.index, "C2IX index")->required();
    e->add_option("--vectors", bench.vectors, "C2VD dataset")->required();
    e->add_option("--queries", bench.queries,
                  "C2VD holdout queries (omit to generate perturbed queries)");
    e->add_option("--out", bench.out, "summary CSV path (default stdout)");
    e->add_option("--per-query", bench.per_query_out, "per-query CSV path");
    e->add_option("--k", bench.k, "neighbors to return");
    e->add_option("--budgets", bench.budgets, "expansion budgets to sweep")
        ->required()
        ->delimiter(',');
    e->add_option("--nq", bench.nq, "generated query count");
    e->add_option("--epsilon-min", bench.epsilon_min, "perturbation variance lower bound");
    e->add_option("--epsilon-max", bench.epsilon_max, "perturbation variance upper bound");
    e->add_option("--query-seed", bench.query_seed, "query generator seed");
    e->add_flag("--strict", bench.strict, "only LP-confirmed emptiness certifies");
    e->add_option("--cert-interval", bench.cert_interval,
                  "run the full certificate cascade every Nth completion");
    e->add_option("--workers", bench.workers, "threads");

    certicos::cli::VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "recheck an index against its dataset exhaustively");
    v->add_option("--index", verify.index, "C2IX index")->required();
    v->add_option("--vectors", verify.vectors, "C2VD dataset")->required();
    v->add_option("--max-report", verify.max_report, "violations to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 2;
    }

    if (b->parsed()) return certicos::cli::run_build(build);
    if (q->parsed()) return certicos::cli::run_query(query);
    if (o->parsed()) return certicos::cli::run_oracle(oracle);
    if (e->parsed()) return certicos::cli::run_bench(bench);
    if (v->parsed()) return certicos::cli::run_verify(verify);
    return 2;
}
