#include <cstring>
#include <fstream>

#include "certicos/index_io.hpp"
#include "certicos/vecstore.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace certicos;
using testutil::run_cmd;

namespace {

const std::string cli = CERTICOS_CLI_BIN;
const std::string gen = C2VD_GEN_BIN;

std::string quiet(const std::string& cmd) { return cmd + " > /dev/null 2>&1"; }

// shared end-to-end fixture: dataset + index built once through the binaries
struct CliWorld {
    testutil::TempDir dir;
    std::string vectors, queries, index;

    CliWorld() {
        vectors = dir.file("data.c2vd");
        queries = dir.file("queries.c2vd");
        index = dir.file("data.c2ix");
        REQUIRE(run_cmd(quiet(gen + " --out " + vectors + " --n 300 --d 6 --seed 5")) == 0);
        REQUIRE(run_cmd(quiet(gen + " --out " + queries + " --n 25 --d 6 --seed 6")) == 0);
        REQUIRE(run_cmd(quiet(cli + " build --vectors " + vectors + " --out " + index +
                              " --K 8 --m 5 --seed 9")) == 0);
    }
};

CliWorld& world() {
    static CliWorld w;
    return w;
}

}  // namespace

TEST_CASE("cli: c2vd_gen output is a valid unit-vector set") {
    testutil::TempDir dir;
    auto uni = dir.file("u.c2vd");
    auto clu = dir.file("c.c2vd");
    REQUIRE(run_cmd(quiet(gen + " --out " + uni + " --n 50 --d 4 --seed 1")) == 0);
    REQUIRE(run_cmd(quiet(gen + " --out " + clu +
                          " --mode clustered --n 60 --d 5 --clusters 3 --sigma 0.2 --seed 2")) ==
            0);

    auto a = load_vectors(uni, false);  // validate-only load: rows must already be unit
    CHECK(a.n == 50);
    CHECK(a.d == 4);
    auto b = load_vectors(clu, false);
    CHECK(b.n == 60);
    CHECK(b.d == 5);

    CHECK(run_cmd(quiet(gen + " --out " + dir.file("x.c2vd") + " --mode nope")) == 2);
    CHECK(run_cmd(quiet(gen + " --out " + dir.file("y.c2vd") + " --n 0")) == 2);
}

TEST_CASE("cli: build then verify round-trips cleanly") {
    auto& w = world();
    auto out = w.dir.file("verify_out.txt");
    CHECK(run_cmd(cli + " verify --index " + w.index + " --vectors " + w.vectors + " > " + out +
                  " 2>/dev/null") == 0);
    CHECK(testutil::slurp(out).find("ok:") == 0);

    auto idx = load_index(w.index);
    CHECK(idx.graph.n == 300);
    CHECK(idx.graph.K == 8);
    CHECK(idx.seeder.m == 5);
}

TEST_CASE("cli: verify flags an index paired with the wrong dataset") {
    auto& w = world();
    auto other = w.dir.file("other.c2vd");
    REQUIRE(run_cmd(quiet(gen + " --out " + other + " --n 300 --d 6 --seed 77")) == 0);
    auto out = w.dir.file("verify_bad.txt");
    CHECK(run_cmd(cli + " verify --index " + w.index + " --vectors " + other + " > " + out +
                  " 2>/dev/null") == 1);
    CHECK(testutil::slurp(out).find("violation") != std::string::npos);
}

TEST_CASE("cli: query emits one JSONL record per query in input order") {
    auto& w = world();
    auto out = w.dir.file("answers.jsonl");
    REQUIRE(run_cmd(quiet(cli + " query --index " + w.index + " --vectors " + w.vectors +
                          " --queries " + w.queries + " --k 5 --budget 200 --out " + out)) == 0);

    auto lines = testutil::read_lines(out);
    REQUIRE(lines.size() == 25);
    auto data = load_vectors(w.vectors, false);
    auto qs = load_vectors(w.queries, false);
    for (size_t i = 0; i < lines.size(); ++i) {
        auto j = nlohmann::json::parse(lines[i]);
        CHECK(j.at("id").get<uint64_t>() == i);
        CHECK(j.at("certified").is_boolean());
        CHECK(j.at("expansions").get<uint64_t>() <= 200);
        CHECK(j.at("micros").is_number());
        auto nb = j.at("neighbors");
        REQUIRE(nb.size() == 5);
        double prev = 2.0;
        for (const auto& entry : nb) {
            auto id = entry.at("id").get<uint64_t>();
            double sim = entry.at("sim").get<double>();
            CHECK(id < data.n);
            CHECK(sim <= prev);  // best-first order
            prev = sim;
            // reported sim really is the dot product with this row
            double want = dot(qs.row(i).data(), data.row(id).data(), data.d);
            CHECK(sim == doctest::Approx(want).epsilon(1e-12));
        }
        if (j.at("certified").get<bool>()) CHECK(j.contains("mechanism"));
    }
}

TEST_CASE("cli: --exact matches the oracle line for line") {
    auto& w = world();
    auto got = w.dir.file("exact.jsonl");
    auto want = w.dir.file("oracle.jsonl");
    REQUIRE(run_cmd(quiet(cli + " query --index " + w.index + " --vectors " + w.vectors +
                          " --queries " + w.queries + " --k 7 --budget 60 --exact --out " +
                          got)) == 0);
    REQUIRE(run_cmd(quiet(cli + " oracle --vectors " + w.vectors + " --queries " + w.queries +
                          " --k 7 --out " + want)) == 0);

    auto got_lines = testutil::read_lines(got);
    auto want_lines = testutil::read_lines(want);
    REQUIRE(got_lines.size() == want_lines.size());
    bool saw_linear_scan = false;
    for (size_t i = 0; i < got_lines.size(); ++i) {
        auto gj = nlohmann::json::parse(got_lines[i]);
        auto wj = nlohmann::json::parse(want_lines[i]);
        CHECK(gj.at("id") == wj.at("id"));
        CHECK(gj.at("neighbors") == wj.at("neighbors"));
        CHECK_FALSE(wj.contains("certified"));  // oracle records stay minimal
        if (gj.contains("mechanism") && gj.at("mechanism") == "linear-scan") {
            saw_linear_scan = true;
            CHECK_FALSE(gj.at("certified").get<bool>());
        }
    }
    CHECK(saw_linear_scan);  // budget 60 is tight enough that some fall back
}

TEST_CASE("cli: bench writes summary and per-query tables") {
    auto& w = world();
    auto summary = w.dir.file("bench.csv");
    auto per_query = w.dir.file("bench_pq.csv");
    REQUIRE(run_cmd(quiet(cli + " bench --index " + w.index + " --vectors " + w.vectors +
                          " --budgets 20,120 --k 4 --nq 30 --epsilon-max 0.05 --out " + summary +
                          " --per-query " + per_query)) == 0);

    auto rows = testutil::read_lines(summary);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "K,budget,recall,qps,certified_fraction,mean_expansions");
    for (size_t r = 1; r < rows.size(); ++r) {
        double recall = 0, cf = 0;
        uint64_t kk = 0, budget = 0;
        REQUIRE(std::sscanf(rows[r].c_str(), "%lu,%lu,%lf,%*f,%lf", &kk, &budget, &recall, &cf) ==
                4);
        CHECK(kk == 8);  // the index's graph degree, not the query k
        CHECK(recall >= 0.0);
        CHECK(recall <= 1.0);
        CHECK(cf >= 0.0);
        CHECK(cf <= 1.0);
    }

    auto pq = testutil::read_lines(per_query);
    REQUIRE(pq.size() == 1 + 2 * 30);
    CHECK(pq[0] == "query_id,budget,d_vstar_q,certified,recall,expansions");
}

TEST_CASE("cli: CERTICOS_LOG appends certificate audit records") {
    auto& w = world();
    auto log = w.dir.file("audit.jsonl");
    REQUIRE(run_cmd(quiet("CERTICOS_LOG=" + log + " " + cli + " query --index " + w.index +
                          " --vectors " + w.vectors + " --queries " + w.queries +
                          " --k 3 --budget 150 --out " + w.dir.file("ignored.jsonl"))) == 0);
    auto lines = testutil::read_lines(log);
    REQUIRE_FALSE(lines.empty());
    for (const auto& line : lines) {
        auto j = nlohmann::json::parse(line);
        CHECK(j.at("event") == "certificate");
        std::string v = j.at("verdict");
        CHECK((v == "certified" || v == "counterexample" || v == "inconclusive"));
        CHECK(j.at("constraints").get<uint64_t>() >= 1);
    }
}

TEST_CASE("cli: validation problems exit 2") {
    auto& w = world();
    // k beyond the dataset
    CHECK(run_cmd(quiet(cli + " query --index " + w.index + " --vectors " + w.vectors +
                        " --queries " + w.queries + " --k 301")) == 2);
    CHECK(run_cmd(quiet(cli + " oracle --vectors " + w.vectors + " --queries " + w.queries +
                        " --k 0")) == 2);
    // K >= n on build
    CHECK(run_cmd(quiet(cli + " build --vectors " + w.vectors + " --out " + w.dir.file("x.c2ix") +
                        " --K 300")) == 2);
    // query dimension mismatch
    auto wrong_d = w.dir.file("d9.c2vd");
    REQUIRE(run_cmd(quiet(gen + " --out " + wrong_d + " --n 5 --d 9")) == 0);
    CHECK(run_cmd(quiet(cli + " query --index " + w.index + " --vectors " + w.vectors +
                        " --queries " + wrong_d)) == 2);
    // index/dataset pairing mismatch
    CHECK(run_cmd(quiet(cli + " verify --index " + w.index + " --vectors " + wrong_d)) == 2);
    // unknown flags and missing required options are parse errors
    CHECK(run_cmd(quiet(cli + " query --index " + w.index)) == 2);
    CHECK(run_cmd(quiet(cli + " frobnicate")) == 2);
}

TEST_CASE("cli: unreadable or corrupt files exit 1") {
    auto& w = world();
    CHECK(run_cmd(quiet(cli + " build --vectors " + w.dir.file("missing.c2vd") + " --out " +
                        w.dir.file("x.c2ix"))) == 1);
    CHECK(run_cmd(quiet(cli + " query --index " + w.dir.file("missing.c2ix") + " --vectors " +
                        w.vectors + " --queries " + w.queries)) == 1);

    // flip one payload byte: CRC catches it at load time
    auto bad = w.dir.file("bad.c2ix");
    auto bytes = testutil::slurp(w.index);
    bytes[40] = static_cast<char>(bytes[40] ^ 0x20);
    std::ofstream(bad, std::ios::binary).write(bytes.data(), bytes.size());
    CHECK(run_cmd(quiet(cli + " verify --index " + bad + " --vectors " + w.vectors)) == 1);

    // truncated vector file
    auto cut = w.dir.file("cut.c2vd");
    auto vb = testutil::slurp(w.vectors);
    std::ofstream(cut, std::ios::binary).write(vb.data(), vb.size() - 7);
    CHECK(run_cmd(quiet(cli + " oracle --vectors " + cut + " --queries " + w.queries)) == 1);
}

TEST_CASE("cli: --no-normalize rejects off-unit rows that default build repairs") {
    testutil::TempDir dir;
    auto raw = dir.file("raw.c2vd");
    {
        std::ofstream out(raw, std::ios::binary);
        out.write("C2VD", 4);
        uint32_t ver = 1, d = 3;
        uint64_t n = 4;
        out.write(reinterpret_cast<const char*>(&ver), 4);
        out.write(reinterpret_cast<const char*>(&n), 8);
        out.write(reinterpret_cast<const char*>(&d), 4);
        const float rows[12] = {2, 0, 0, 0, 1, 0, 0, 0, 5, 1, 1, 1};
        out.write(reinterpret_cast<const char*>(rows), sizeof rows);
    }
    CHECK(run_cmd(quiet(cli + " build --vectors " + raw + " --out " + dir.file("a.c2ix") +
                        " --K 2 --no-normalize")) == 2);
    CHECK(run_cmd(quiet(cli + " build --vectors " + raw + " --out " + dir.file("b.c2ix") +
                        " --K 2")) == 0);
}
