#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lrpo/diffusion.hpp"
#include "lrpo/graph.hpp"
#include "lrpo/seeds.hpp"

namespace lrpo {

/// Whether a label belongs to V_{>=h}: its phase value is h or larger, with
/// unphased labels counting as larger than every phase.
inline bool in_phase_at_least(const SeedBundle& seeds, Label v, std::uint64_t h) {
    auto ph = seeds.phase_of(v);
    return !ph || *ph >= h;
}

/// The findr candidate ladder: powers of two up to 2*ceil(1/rho).
inline std::vector<std::uint64_t> k_ladder(const Params& params) {
    std::vector<std::uint64_t> ks;
    for (std::uint64_t k = 1; k <= params.k_ladder_max(); k *= 2) ks.push_back(k);
    return ks;
}

/// Multi-k viability scan for one vertex: for each ladder entry k, decides
/// whether at least viable_timesteps() choices of t in [1, ell] produce a
/// non-singleton cluster(v, t, k) capturing >= beta^3 * k free vertices.
/// Shares the per-t level scan across the whole ladder and exits early once
/// every k is decided; results match the one-k definition exactly.
template <class Access, class IsFree>
std::vector<char> viable_on_ladder(const Access& g, const SeedBundle& seeds, Label v,
                                   const std::vector<std::uint64_t>& ladder, IsFree&& is_free) {
    const Params& params = seeds.params();
    const std::uint64_t need = std::max<std::uint64_t>(1, params.viable_timesteps());
    const double beta3 = params.beta() * params.beta() * params.beta();
    std::vector<std::uint64_t> good(ladder.size(), 0);
    std::vector<char> decided(ladder.size(), 0), result(ladder.size(), 0);
    std::size_t open = ladder.size();
    const bool v_free = is_free(v);
    DiffusionWalk<Access> walk(g, v, params.rho);
    for (std::uint64_t t = 1; t <= params.ell && open > 0; ++t) {
        walk.step();
        LevelScan scan = scan_levels(g, walk.vec(), v, 2 * ladder.back());
        // free-vertex counts over prefixes of the mass order
        std::vector<std::uint32_t> free_prefix(scan.order.size() + 1, 0);
        std::vector<char> v_in_prefix(scan.order.size() + 1, 0);
        for (std::size_t j = 0; j < scan.order.size(); ++j) {
            free_prefix[j + 1] = free_prefix[j] + (is_free(scan.order[j].first) ? 1 : 0);
            v_in_prefix[j + 1] = v_in_prefix[j] | (scan.order[j].first == v);
        }
        for (std::size_t i = 0; i < ladder.size(); ++i) {
            if (decided[i]) continue;
            std::uint64_t k = ladder[i];
            // replicate cluster()'s first-accept scan over k' in [k, 2k]
            bool good_t = false;
            for (std::uint64_t kp = k; kp <= 2 * k; ++kp) {
                std::size_t j = std::min<std::size_t>(kp, scan.order.size());
                if (j == 0) {
                    // empty support: candidate is {v} itself
                    if (conductance(g, std::span<const Label>(&v, 1)) < params.phi)
                        good_t = double(v_free ? 1 : 0) >= beta3 * double(k);
                    break;
                }
                if (scan.gap_ok[j - 1] && scan.phi[j - 1] < params.phi) {
                    std::uint32_t captured =
                        free_prefix[j] + ((!v_in_prefix[j] && v_free) ? 1 : 0);
                    good_t = double(captured) >= beta3 * double(k);
                    break;
                }
            }
            if (good_t && ++good[i] >= need) {
                result[i] = 1;
                decided[i] = 1;
                --open;
            } else if (!good_t && good[i] + (params.ell - t) < need) {
                decided[i] = 1;
                --open;
            }
        }
    }
    return result;
}

/// Single-k viability through the same scan, for direct checks.
template <class Access, class IsFree>
bool is_viable(const Access& g, const SeedBundle& seeds, Label v, std::uint64_t /*h*/,
               std::uint64_t k, IsFree&& is_free) {
    std::vector<std::uint64_t> ladder{k};
    return viable_on_ladder(g, seeds, v, ladder, std::forward<IsFree>(is_free))[0] != 0;
}

/// Full per-vertex viability evidence: how many timesteps produced a
/// qualifying cluster, against the required count.
struct ViabilityRecord {
    Label vertex = 0;
    std::uint64_t h = 0;
    std::uint64_t k = 0;
    std::uint64_t good_timesteps = 0;
    std::uint64_t needed = 0;
    bool viable() const { return good_timesteps >= needed; }
};

template <class Access, class IsFree>
ViabilityRecord viability_record(const Access& g, const SeedBundle& seeds, Label v,
                                 std::uint64_t h, std::uint64_t k, IsFree&& is_free) {
    const Params& params = seeds.params();
    ViabilityRecord rec;
    rec.vertex = v;
    rec.h = h;
    rec.k = k;
    rec.needed = std::max<std::uint64_t>(1, params.viable_timesteps());
    const double beta3 = params.beta() * params.beta() * params.beta();
    DiffusionWalk<Access> walk(g, v, params.rho);
    for (std::uint64_t t = 1; t <= params.ell; ++t) {
        walk.step();
        ClusterResult c = cluster_from_vector(g, walk.vec(), v, t, k, params);
        if (c.is_singleton) continue;
        std::uint64_t captured = 0;
        for (Label x : c.members) captured += is_free(x) ? 1 : 0;
        if (double(captured) >= beta3 * double(k)) ++rec.good_timesteps;
    }
    return rec;
}

/// Phase-h threshold selection. Draws the phase's full sample budget,
/// filters to V_{>=h}, and returns the smallest ladder k for which at least
/// max(12 * beta^4 * |S_h|, 1) samples are (h,k)-viable; 0 when none is.
template <class Access, class LabelAt, class IsFree>
std::uint64_t findr(const Access& g, const SeedBundle& seeds, std::uint64_t h, std::uint64_t n,
                    LabelAt&& label_at, IsFree&& is_free) {
    const Params& params = seeds.params();
    std::vector<Label> sample;
    sample.reserve(params.sample_budget);
    for (std::uint64_t j = 1; j <= params.sample_budget; ++j) {
        Label s = label_at(seeds.sample_vertex(h, j, n));
        if (in_phase_at_least(seeds, s, h)) sample.push_back(s);
    }
    if (sample.empty()) return 0;
    auto ladder = k_ladder(params);
    std::vector<std::uint64_t> counts(ladder.size(), 0);
    for (Label s : sample) {
        auto viable = viable_on_ladder(g, seeds, s, ladder, is_free);
        for (std::size_t i = 0; i < ladder.size(); ++i) counts[i] += viable[i];
    }
    double beta = params.beta();
    double threshold = 12.0 * beta * beta * beta * beta * double(sample.size());
    threshold = std::max(threshold, params.findr_fraction * double(sample.size()));
    for (std::size_t i = 0; i < ladder.size(); ++i)
        if (counts[i] >= 1 && double(counts[i]) >= threshold) return ladder[i];
    return 0;
}

struct PhaseStat {
    std::uint64_t h = 0;
    std::uint64_t free_at_start = 0;  // |F_h|
    std::uint64_t phased = 0;         // |V_h|
    std::uint64_t k_h = 0;
    std::uint64_t clusters_carved = 0;
    std::uint64_t x_h = 0;  // sum over v in V_h of |cluster(v) n F_h|
};

struct PartitionResult {
    std::vector<std::vector<Label>> components;  // each sorted by label
    std::unordered_map<Label, std::uint32_t> component_of;
    std::vector<std::pair<Label, Label>> cut_edges;  // u < v
    std::vector<PhaseStat> phase_stats;

    std::uint64_t max_component_size() const;
    std::uint64_t sum_x() const;
};

/// The sequential phased carving procedure. Deterministic given
/// (graph, seed material, params).
PartitionResult global_partition(const Graph& g, const SeedBundle& seeds);

/// Exact number of edges with endpoints in distinct components; throws if
/// the partition does not cover every vertex.
std::uint64_t count_cut_edges(const Graph& g, const PartitionResult& p);

/// Checks connectivity, disjointness, coverage, the ell/rho size bound, and
/// that cut_edges is exactly the crossing-edge set. Throws std::runtime_error
/// naming the first violation.
void validate_partition(const Graph& g, const PartitionResult& p, const Params& params);

std::string partition_to_json(const Graph& g, const SeedBundle& seeds,
                              const PartitionResult& p);

}  // namespace lrpo
