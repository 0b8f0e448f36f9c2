#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "certicos/certifier.hpp"

namespace certicos::cli {

// Exit codes: 0 success, 2 bad parameters or mismatched inputs, 1 anything
// else (unreadable files, runtime failures, failed verification).

struct BuildArgs {
    std::string vectors;
    std::string out;
    uint32_t K = 20;
    uint32_t m = 12;
    uint64_t seed = 42;
    bool normalize = true;
    unsigned workers = 0;  // 0: all cores
};
int run_build(const BuildArgs& args);

struct QueryArgs {
    std::string index;
    std::string vectors;
    std::string queries;
    std::string out;  // empty: stdout
    uint32_t k = 10;
    uint64_t budget = 1000;
    bool exact = false;  // replace uncertified answers with a linear scan
    bool strict = false;
    uint32_t cert_interval = 1;
    unsigned workers = 1;
};
int run_query(const QueryArgs& args);

struct OracleArgs {
    std::string vectors;
    std::string queries;
    std::string out;  // empty: stdout
    uint32_t k = 10;
    unsigned workers = 1;
};
int run_oracle(const OracleArgs& args);

struct BenchArgs {
    std::string index;
    std::string vectors;
    std::string queries;  // empty: generate perturbed queries instead
    std::string out;      // summary csv; empty: stdout
    std::string per_query_out;
    uint32_t k = 10;
    std::vector<uint64_t> budgets;
    uint64_t nq = 1000;
    double epsilon_min = 0.0;
    double epsilon_max = 0.5;
    uint64_t query_seed = 1;
    bool strict = false;
    uint32_t cert_interval = 1;
    unsigned workers = 1;
};
int run_bench(const BenchArgs& args);

struct VerifyArgs {
    std::string index;
    std::string vectors;
    uint64_t max_report = 10;
};
int run_verify(const VerifyArgs& args);

/// Audit sink selected by the CERTICOS_LOG environment variable: unset, ""
/// or "0" disables, "-"/"stderr"/"1" streams JSONL records to stderr, any
/// other value appends to that path. Thread-safe.
std::function<void(const CertAuditRecord&)> audit_sink_from_env();

}  // namespace certicos::cli
