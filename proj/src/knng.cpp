#include "certicos/knng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parallel.hpp"

namespace certicos {

namespace {

// Fixed-capacity worst-on-top heap living in a flat slab, one region per
// vertex. Replace-top + sift-down instead of pop/push keeps the inner loop
// branch-light.
struct HeapSlab {
    std::vector<ScoredId> items;
    std::vector<uint32_t> sizes;
    uint32_t cap;

    HeapSlab(uint64_t n, uint32_t K) : items(n * K), sizes(n, 0), cap(K) {}

    // true when a should sit above b (a is the worse candidate)
    static bool worse(const ScoredId& a, const ScoredId& b) { return better(b, a); }

    void sift_up(ScoredId* h, uint32_t pos) {
        ScoredId moving = h[pos];
        while (pos > 0) {
            uint32_t parent = (pos - 1) / 2;
            if (!worse(moving, h[parent])) break;
            h[pos] = h[parent];
            pos = parent;
        }
        h[pos] = moving;
    }

    void sift_down(ScoredId* h, uint32_t size) {
        ScoredId moving = h[0];
        uint32_t pos = 0;
        for (;;) {
            uint32_t child = 2 * pos + 1;
            if (child >= size) break;
            if (child + 1 < size && worse(h[child + 1], h[child])) ++child;
            if (!worse(h[child], moving)) break;
            h[pos] = h[child];
            pos = child;
        }
        h[pos] = moving;
    }

    void offer(uint64_t i, ScoredId cand) {
        ScoredId* h = items.data() + i * cap;
        uint32_t& size = sizes[i];
        if (size < cap) {
            h[size] = cand;
            sift_up(h, size);
            ++size;
        } else if (better(cand, h[0])) {
            h[0] = cand;
            sift_down(h, size);
        }
    }
};

// b_i must never round below the true K-th similarity, or a tie sitting
// exactly on the boundary would be outside the list yet inside the claimed
// ball. One ulp of slack in the other direction only makes the radius
// conservative.
float round_radius_up(double s) {
    float b = static_cast<float>(s);
    if (static_cast<double>(b) < s)
        b = std::nextafterf(b, std::numeric_limits<float>::infinity());
    return b;
}

size_t pick_block(uint32_t d, uint64_t n) {
    size_t rows = (256u * 1024u) / (static_cast<size_t>(d) * sizeof(float));
    rows = std::clamp<size_t>(rows, 64, 8192);
    return std::min<size_t>(rows, n);
}

}  // namespace

KnnGraph build_knng(const UnitVectorSet& set, uint32_t K, unsigned workers) {
    if (K == 0) throw DataError("knng: K must be at least 1");
    if (set.n < 2 || K > set.n - 1)
        throw DataError("knng: K must be at most n-1");

    const uint64_t n = set.n;
    const uint32_t d = set.d;
    HeapSlab slab(n, K);
    const size_t block = pick_block(d, n);

    // The survivors of a capacity-K heap under a strict total order are the
    // K largest candidates no matter the arrival order, so the two scan
    // shapes below build the same graph.
    if (detail::resolve_workers(workers) == 1) {
        // single worker: lower-triangle scan, each pair offered to both rows
        for (uint64_t jb = 0; jb < n; jb += block) {
            const uint64_t jend = std::min(n, jb + block);
            for (uint64_t i = jb + 1; i < n; ++i) {
                const float* vi = set.row(i).data();
                const uint64_t jcap = std::min(jend, i);
                for (uint64_t j = jb; j < jcap; ++j) {
                    double s = dot(vi, set.row(j).data(), d);
                    slab.offer(i, {static_cast<uint32_t>(j), s});
                    slab.offer(j, {static_cast<uint32_t>(i), s});
                }
            }
        }
    } else {
        // j-blocked scan: the block of candidate rows stays cache-resident
        // while each worker streams its own i-range past it; every heap is
        // touched by exactly one worker
        detail::run_chunked(n, workers, [&](uint64_t i0, uint64_t i1, unsigned) {
            for (uint64_t jb = 0; jb < n; jb += block) {
                const uint64_t jend = std::min(n, jb + block);
                for (uint64_t i = i0; i < i1; ++i) {
                    const float* vi = set.row(i).data();
                    for (uint64_t j = jb; j < jend; ++j) {
                        if (j == i) continue;
                        double s = dot(vi, set.row(j).data(), d);
                        slab.offer(i, {static_cast<uint32_t>(j), s});
                    }
                }
            }
        });
    }

    KnnGraph g;
    g.n = n;
    g.d = d;
    g.K = K;
    g.adjacency.resize(n * K);
    g.radii.resize(n);
    detail::run_chunked(n, workers, [&](uint64_t i0, uint64_t i1, unsigned) {
        for (uint64_t i = i0; i < i1; ++i) {
            ScoredId* h = slab.items.data() + i * K;
            std::sort(h, h + K, [](const ScoredId& a, const ScoredId& b) { return better(a, b); });
            for (uint32_t r = 0; r < K; ++r) g.adjacency[i * K + r] = h[r].id;
            g.radii[i] = round_radius_up(h[K - 1].sim);
        }
    });
    return g;
}

std::vector<KnngViolation> verify_knng(const UnitVectorSet& set, const KnnGraph& g) {
    if (g.n != set.n || g.d != set.d)
        throw DataError("verify_knng: graph does not match vector set");

    unsigned workers = detail::resolve_workers(0);
    uint64_t nchunks = std::min<uint64_t>(workers, set.n);
    std::vector<std::vector<KnngViolation>> found(std::max<uint64_t>(nchunks, 1));

    detail::run_chunked(set.n, workers, [&](uint64_t i0, uint64_t i1, unsigned chunk) {
        std::vector<uint8_t> member(set.n, 0);
        auto& out = found[chunk];
        for (uint64_t i = i0; i < i1; ++i) {
            auto nbrs = g.neighbors(i);
            for (uint32_t id : nbrs) member[id] = 1;
            const float* vi = set.row(i).data();
            const double bi = g.radii[i];
            for (uint64_t j = 0; j < set.n; ++j) {
                if (j == i || member[j]) continue;
                double s = dot(vi, set.row(j).data(), set.d);
                if (s > bi)
                    out.push_back({static_cast<uint32_t>(i), static_cast<uint32_t>(j), s});
            }
            for (uint32_t id : nbrs) member[id] = 0;
        }
    });

    std::vector<KnngViolation> all;
    for (auto& part : found)
        all.insert(all.end(), part.begin(), part.end());
    return all;
}

}  // namespace certicos
