#include "certicos/search.hpp"

#include <algorithm>
#include <chrono>

namespace certicos {

Searcher::Searcher(const UnitVectorSet& vectors, const KnnGraph& graph, const LshSeeder& seeder,
                   const Query& query, SearchParams params)
    : vectors_(vectors),
      graph_(graph),
      query_(query),
      params_(std::move(params)) {
    if (graph_.n != vectors_.n || graph_.d != vectors_.d)
        throw DataError("search: graph does not match vector set");
    if (query_.q.size() != vectors_.d) throw DataError("search: query dimension mismatch");
    if (query_.k_req > vectors_.n) throw DataError("search: k exceeds dataset size");
    if (params_.cert_interval == 0) throw DataError("search: cert interval must be positive");

    ccfg_.project = params_.project;
    ccfg_.simplex = params_.simplex;
    ccfg_.strict_soundness = params_.strict_soundness;
    ccfg_.audit = params_.audit;

    store_.q = query_.q;
    x_.assign(query_.q.begin(), query_.q.end());
    explored_.assign(vectors_.n, 0);
    completed_.assign(vectors_.n, 0);
    cursor_.assign(vectors_.n, 0);
    qsim_.assign(vectors_.n, 0.0);
    topk_.reserve(query_.k_req);

    visit(seeder.seed(query_.q));  // seeding is free; budget counts expansions only
}

double Searcher::certified_threshold() const {
    return topk_.size() == query_.k_req ? topk_.front().sim : -1.0;
}

double Searcher::key_of(uint32_t id) const {
    if (!retargeted_) return qsim_[id];
    return dot(x_.data(), vectors_.row(id).data(), vectors_.d);
}

void Searcher::offer_topk(uint32_t id, double sim) {
    ScoredId cand{id, sim};
    if (topk_.size() < query_.k_req) {
        topk_.push_back(cand);
        std::push_heap(topk_.begin(), topk_.end(), better);
    } else if (better(cand, topk_.front())) {
        std::pop_heap(topk_.begin(), topk_.end(), better);
        topk_.back() = cand;
        std::push_heap(topk_.begin(), topk_.end(), better);
    }
}

void Searcher::visit(uint32_t id) {
    explored_[id] = 1;
    explored_ids_.push_back(id);
    double qs = dot(query_.q.data(), vectors_.row(id).data(), vectors_.d);
    qsim_[id] = qs;
    offer_topk(id, qs);
    pq_.push({retargeted_ ? key_of(id) : qs, id});
}

void Searcher::complete(uint32_t j) {
    auto row = vectors_.row(j);
    store_.add({std::vector<float>(row.begin(), row.end()), graph_.radii[j], j});
    store_.threshold = certified_threshold();
    ++completions_;

    bool cascade = (completions_ % params_.cert_interval) == 0;
    CertOutcome out = construct_certificate(store_, qsim_[j], graph_.radii[j], ccfg_, cascade);
    if (out.verdict == CertVerdict::Certified) {
        certified_ = true;
        mechanism_ = out.mechanism;
    } else if (out.verdict == CertVerdict::Counterexample) {
        apply_retarget(out.point);
    }
}

void Searcher::apply_retarget(std::span<const double> x) {
    x_.assign(x.begin(), x.end());
    retargeted_ = true;
    pq_ = {};
    for (uint32_t id : explored_ids_)
        if (!completed_[id]) pq_.push({key_of(id), id});
}

bool Searcher::step() {
    if (certified_) return false;
    for (;;) {
        while (!pq_.empty() && completed_[pq_.top().id]) pq_.pop();
        if (pq_.empty()) return false;

        const uint32_t j = pq_.top().id;
        auto nbrs = graph_.neighbors(j);
        uint32_t c = cursor_[j];
        while (c < graph_.K && explored_[nbrs[c]]) ++c;
        cursor_[j] = c;

        if (c == graph_.K) {
            // nothing left to expand here: retire the vertex (free) and let
            // the certifier see its ball
            pq_.pop();
            completed_[j] = 1;
            complete(j);
            if (certified_) return false;
            continue;
        }

        if (expansions_ >= query_.budget) return false;
        ++expansions_;
        const uint32_t vn = nbrs[c];
        cursor_[j] = c + 1;
        visit(vn);

        // that may have been j's last unexplored neighbor
        uint32_t c2 = cursor_[j];
        while (c2 < graph_.K && explored_[nbrs[c2]]) ++c2;
        cursor_[j] = c2;
        if (c2 == graph_.K) {
            completed_[j] = 1;  // still in pq_; the lazy pop above skips it
            complete(j);
        }
        return !certified_;
    }
}

void Searcher::run() {
    while (step()) {
    }
}

std::vector<uint32_t> Searcher::live_queue() const {
    auto copy = pq_;
    std::vector<uint32_t> ids;
    while (!copy.empty()) {
        if (!completed_[copy.top().id]) ids.push_back(copy.top().id);
        copy.pop();
    }
    return ids;
}

QueryResult Searcher::result() const {
    QueryResult res;
    res.neighbors = topk_;
    std::sort(res.neighbors.begin(), res.neighbors.end(), better);
    res.certified = certified_;
    res.mechanism = mechanism_;
    res.expansions = expansions_;
    return res;
}

QueryResult lookup(const UnitVectorSet& vectors, const KnnGraph& graph, const LshSeeder& seeder,
                   const Query& query, const SearchParams& params) {
    auto start = std::chrono::steady_clock::now();
    Searcher s(vectors, graph, seeder, query, params);
    s.run();
    QueryResult res = s.result();
    auto end = std::chrono::steady_clock::now();
    res.micros = static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(end - start).count());
    return res;
}

}  // namespace certicos
