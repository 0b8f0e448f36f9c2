#pragma once

#include <cstdint>
#include <queue>
#include <span>
#include <vector>

#include "certicos/certifier.hpp"
#include "certicos/knng.hpp"
#include "certicos/seeder.hpp"
#include "certicos/vecstore.hpp"

namespace certicos {

struct SearchParams {
    // full mechanism cascade every cert_interval-th completion; the cheap
    // single-point test runs on every completion regardless
    uint32_t cert_interval = 1;
    bool strict_soundness = false;
    ProjectOptions project;
    SimplexOptions simplex;
    std::function<void(const CertAuditRecord&)> audit;
};

struct QueryResult {
    std::vector<ScoredId> neighbors;  // best-first; may be shorter than k on tiny budgets
    bool certified = false;
    CertMechanism mechanism = CertMechanism::None;
    uint64_t expansions = 0;
    uint64_t micros = 0;
};

/// Best-first traversal of the neighbor graph. The queue is keyed by
/// similarity to the retarget point x (initially the query); expanding pops
/// one unexplored neighbor of the queue head per step and costs one unit of
/// budget. A vertex whose neighborhood is fully explored completes: its ball
/// becomes a constraint, the certifier runs, and a counterexample re-keys
/// the queue toward the unexplored region it exposed.
class Searcher {
  public:
    Searcher(const UnitVectorSet& vectors, const KnnGraph& graph, const LshSeeder& seeder,
             const Query& query, SearchParams params = {});

    /// One expansion or completion; false once certified, out of budget, or
    /// out of frontier.
    bool step();
    void run();

    QueryResult result() const;

    const ConstraintStore& store() const { return store_; }
    double certified_threshold() const;
    bool certified() const { return certified_; }
    CertMechanism mechanism() const { return mechanism_; }
    uint64_t expansions() const { return expansions_; }
    bool retargeted() const { return retargeted_; }
    std::span<const double> retarget_point() const { return x_; }
    std::vector<uint32_t> live_queue() const;  // ids best-first under the current key
    void apply_retarget(std::span<const double> x);

  private:
    struct QEntry {
        double key;
        uint32_t id;
    };
    struct QOrder {
        bool operator()(const QEntry& a, const QEntry& b) const {
            return a.key < b.key || (a.key == b.key && a.id > b.id);
        }
    };

    void visit(uint32_t id);
    void offer_topk(uint32_t id, double sim);
    void complete(uint32_t j);
    double key_of(uint32_t id) const;

    const UnitVectorSet& vectors_;
    const KnnGraph& graph_;
    const Query& query_;
    SearchParams params_;
    CertifierConfig ccfg_;

    ConstraintStore store_;
    std::vector<double> x_;  // retarget point
    bool retargeted_ = false;

    std::priority_queue<QEntry, std::vector<QEntry>, QOrder> pq_;
    std::vector<uint8_t> explored_;
    std::vector<uint8_t> completed_;
    std::vector<uint32_t> cursor_;
    std::vector<double> qsim_;
    std::vector<uint32_t> explored_ids_;
    std::vector<ScoredId> topk_;  // worst-on-top heap of current candidates

    uint64_t expansions_ = 0;
    uint64_t completions_ = 0;
    bool certified_ = false;
    CertMechanism mechanism_ = CertMechanism::None;
};

QueryResult lookup(const UnitVectorSet& vectors, const KnnGraph& graph, const LshSeeder& seeder,
                   const Query& query, const SearchParams& params = {});

}  // namespace certicos
