#include "lrpo/oracle.hpp"

#include <algorithm>
#include <set>

#include "lrpo/diffusion.hpp"

namespace lrpo {

std::span<const Label> OracleSession::View::neighbors(Label v) const {
    auto it = cache_.find(v);
    if (it == cache_.end()) {
        std::vector<Label> nbrs;
        for (std::uint64_t r = 1; r <= handle_->graph().degree_bound(); ++r) {
            auto w = handle_->neighbor_query(v, r);
            if (!w) break;  // slots past the degree stay absent
            nbrs.push_back(*w);
        }
        it = cache_.emplace(v, std::move(nbrs)).first;
    }
    return it->second;
}

OracleSession::OracleSession(const Graph& g, const SeedBundle& seeds)
    : handle_(g), view_(handle_), seeds_(&seeds), n_(g.vertex_count()),
      k_cache_(seeds.params().hbar()) {
    handle_.record_targets(&exploration_);
}

void OracleSession::reset_stats() {
    handle_.reset_counters();
    stats_ = OracleStats{};
}

std::uint64_t OracleSession::ensure_k(std::uint32_t h) {
    auto& slot = k_cache_[h - 1];
    if (slot) return *slot;
    std::uint64_t before_n = handle_.neighbor_queries();
    std::uint64_t before_l = handle_.label_queries();
    bool outermost = findr_depth_ == 0;
    if (outermost) handle_.record_targets(nullptr);
    ++findr_depth_;
    std::uint64_t k = findr(
        view_, *seeds_, h, n_, [this](std::uint64_t i) { return handle_.label_query(i); },
        [this, h](Label x) { return is_free_at_phase_start(x, h); });
    --findr_depth_;
    if (outermost) {
        handle_.record_targets(&exploration_);
        stats_.findr_neighbor_queries += handle_.neighbor_queries() - before_n;
        stats_.findr_label_queries += handle_.label_queries() - before_l;
    }
    slot = k;
    return k;
}

bool OracleSession::is_free_at_phase_start(Label x, std::uint32_t h) {
    return !resolve_claim_below(x, h).has_value();
}

const std::vector<Label>& OracleSession::reach_of(Label w) {
    auto it = reach_cache_.find(w);
    if (it == reach_cache_.end()) {
        std::set<Label> reach{w};  // t = 0 support
        DiffusionWalk<View> walk(view_, w, seeds_->params().rho);
        for (std::uint64_t t = 1; t <= seeds_->params().ell; ++t) {
            walk.step();
            if (walk.vec().empty()) break;
            for (const auto& [l, m] : walk.vec().entries()) reach.insert(l);
        }
        it = reach_cache_.emplace(w, std::vector<Label>(reach.begin(), reach.end())).first;
    }
    return it->second;
}

const std::vector<Label>& OracleSession::inverse_ball_of(Label x) {
    auto it = ib_cache_.find(x);
    if (it == ib_cache_.end()) {
        // the reach sets of ball members are shared across queries, which
        // keeps repeated inverse-ball computations near-linear overall
        std::vector<Label> ib;
        for (Label w : bfs_ball(view_, x, seeds_->params().ell)) {
            const auto& reach = reach_of(w);
            if (std::binary_search(reach.begin(), reach.end(), x)) ib.push_back(w);
        }
        it = ib_cache_.emplace(x, std::move(ib)).first;
    }
    return it->second;
}

std::optional<std::uint32_t> OracleSession::phase_of(Label v) {
    auto it = phase_cache_.find(v);
    if (it == phase_cache_.end()) it = phase_cache_.emplace(v, seeds_->phase_of(v)).first;
    return it->second;
}

const std::vector<Label>& OracleSession::cluster_members(Label w, std::uint32_t h) {
    auto key = std::make_pair(w, h);
    auto it = cluster_cache_.find(key);
    if (it == cluster_cache_.end()) {
        std::uint64_t k_h = ensure_k(h);
        std::uint64_t t_w = seeds_->draw_timestep(h, w);
        it = cluster_cache_
                 .emplace(key, cluster(view_, w, t_w, k_h, seeds_->params()).members)
                 .first;
    }
    return it->second;
}

/// Earliest claiming turn of x among phases < limit, advancing the memoized
/// scan as far as needed. A turn (h, w) claims x when w was free at phase
/// h's start, has phase value h, the phase fired (k_h > 0), and x lies in
/// cluster(w, t_w, k_h); within a phase the smallest-label center wins,
/// matching the global processing order.
std::optional<OracleSession::Turn> OracleSession::resolve_claim_below(Label x,
                                                                      std::uint32_t limit) {
    const std::uint32_t hbar = std::uint32_t(seeds_->params().hbar());
    limit = std::min<std::uint32_t>(limit, hbar + 1);
    while (true) {
        // copy + write-back: the scan below recurses into other labels (and,
        // through candidate w == x, into this label with limit <= p, which
        // returns without touching state), so no reference is held across it
        Progress pr = progress_[x];
        if (pr.claim && pr.claim->phase < limit) return pr.claim;
        if (pr.claim || pr.next_phase >= limit) return std::nullopt;
        std::uint32_t p = pr.next_phase;
        std::optional<Turn> found;
        if (ensure_k(p) > 0) {
            for (Label w : inverse_ball_of(x)) {
                auto ph = phase_of(w);
                if (!ph || *ph != p) continue;
                if (!is_free_at_phase_start(w, p)) continue;  // w must be in V_p
                const auto& members = cluster_members(w, p);
                if (std::binary_search(members.begin(), members.end(), x)) {
                    found = Turn{p, w};
                    break;
                }
            }
        }
        auto& fresh = progress_[x];
        fresh.claim = found;
        if (!found) fresh.next_phase = p + 1;
    }
}

AnchorDecision OracleSession::decide(Label u) {
    AnchorDecision out;
    out.vertex = u;
    auto claim = resolve_claim_below(u, std::uint32_t(seeds_->params().hbar()) + 1);
    if (!claim) {
        out.leftover = true;
        out.component = {u};
        return out;
    }
    out.leftover = false;
    out.phase = claim->phase;
    out.center = claim->center;
    // the carved piece is the connected component of u inside the set of
    // cluster members whose own anchor is this very turn
    const auto& members = cluster_members(claim->center, claim->phase);
    std::vector<Label> same;
    for (Label x : members) {
        auto cx = resolve_claim_below(x, std::uint32_t(seeds_->params().hbar()) + 1);
        if (cx && *cx == *claim) same.push_back(x);
    }
    std::unordered_set<Label> pool(same.begin(), same.end());
    std::vector<Label> comp{u};
    pool.erase(u);
    for (std::size_t i = 0; i < comp.size(); ++i)
        for (Label w : view_.neighbors(comp[i]))
            if (pool.erase(w)) comp.push_back(w);
    std::sort(comp.begin(), comp.end());
    out.component = std::move(comp);
    return out;
}

AnchorDecision OracleSession::find_anchor(Label u) {
    ++stats_.calls;
    exploration_.clear();
    std::uint64_t before =
        handle_.neighbor_queries() + handle_.label_queries();
    AnchorDecision out = decide(u);
    std::uint64_t delta = handle_.neighbor_queries() + handle_.label_queries() - before;
    stats_.max_per_call = std::max(stats_.max_per_call, delta);
    stats_.neighbor_queries = handle_.neighbor_queries();
    stats_.label_queries = handle_.label_queries();
    return out;
}

std::vector<Label> OracleSession::find_partition(Label u) {
    return find_anchor(u).component;
}

}  // namespace lrpo
