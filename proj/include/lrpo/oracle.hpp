#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lrpo/graph.hpp"
#include "lrpo/partition.hpp"
#include "lrpo/seeds.hpp"

namespace lrpo {

struct AnchorDecision {
    Label vertex = 0;
    bool leftover = true;
    std::uint32_t phase = 0;  // valid when !leftover
    Label center = 0;         // valid when !leftover
    std::vector<Label> component;
};

struct OracleStats {
    std::uint64_t neighbor_queries = 0;
    std::uint64_t label_queries = 0;
    std::uint64_t max_per_call = 0;  // queries (both kinds) of the costliest call
    std::uint64_t findr_neighbor_queries = 0;  // replay portion of the totals
    std::uint64_t findr_label_queries = 0;
    std::uint64_t calls = 0;
};

/// Per-vertex partition oracle. Computes, through graph queries alone, the
/// component of the queried vertex in exactly the partition global_partition
/// produces from the same seed bundle. A session memoizes adjacency, anchor
/// progress, and the per-phase findr replay; memoization never changes
/// answers, so sharing one session across queries is sound. Use a fresh
/// session per call when measuring per-call query cost. Sessions are
/// single-threaded; for concurrency give each thread its own session over
/// the shared graph and seeds, which yields identical answers.
class OracleSession {
public:
    OracleSession(const Graph& g, const SeedBundle& seeds);

    AnchorDecision find_anchor(Label u);
    std::vector<Label> find_partition(Label u);

    OracleStats stats() const { return stats_; }
    void reset_stats();

    /// Labels neighbor-queried outside findr replay during the most recent
    /// call; the locality tests assert these stay inside a fixed-radius ball.
    const std::vector<Label>& last_exploration_targets() const { return exploration_; }

private:
    // adjacency view over the counting handle; caches each vertex's
    // neighbor list after the first (query-funded) retrieval
    class View {
    public:
        explicit View(OracleHandle& h) : handle_(&h) {}
        std::uint64_t degree_bound() const { return handle_->graph().degree_bound(); }
        std::span<const Label> neighbors(Label v) const;

    private:
        OracleHandle* handle_;
        mutable std::map<Label, std::vector<Label>> cache_;
    };

    struct Turn {
        std::uint32_t phase;
        Label center;
        bool operator==(const Turn&) const = default;
    };
    struct Progress {
        std::uint32_t next_phase = 1;  // phases below this are claim-free
        std::optional<Turn> claim;
    };

    std::uint64_t ensure_k(std::uint32_t h);
    bool is_free_at_phase_start(Label x, std::uint32_t h);
    std::optional<Turn> resolve_claim_below(Label x, std::uint32_t limit);
    const std::vector<Label>& inverse_ball_of(Label x);
    const std::vector<Label>& reach_of(Label w);  // union of truncated-walk supports
    const std::vector<Label>& cluster_members(Label w, std::uint32_t h);
    std::optional<std::uint32_t> phase_of(Label v);
    AnchorDecision decide(Label u);

    OracleHandle handle_;
    View view_;
    const SeedBundle* seeds_;
    std::uint64_t n_;
    std::vector<std::optional<std::uint64_t>> k_cache_;  // index h-1
    std::map<Label, Progress> progress_;
    std::map<Label, std::vector<Label>> ib_cache_;
    std::map<Label, std::vector<Label>> reach_cache_;
    std::map<Label, std::optional<std::uint32_t>> phase_cache_;
    std::map<std::pair<Label, std::uint32_t>, std::vector<Label>> cluster_cache_;
    OracleStats stats_;
    std::vector<Label> exploration_;
    int findr_depth_ = 0;
};

}  // namespace lrpo
