#include "lrpo/partition.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lrpo {

std::uint64_t PartitionResult::max_component_size() const {
    std::uint64_t m = 0;
    for (const auto& c : components) m = std::max<std::uint64_t>(m, c.size());
    return m;
}

std::uint64_t PartitionResult::sum_x() const {
    std::uint64_t s = 0;
    for (const auto& st : phase_stats) s += st.x_h;
    return s;
}

PartitionResult global_partition(const Graph& g, const SeedBundle& seeds) {
    const Params& params = seeds.params();
    const std::uint64_t n = g.vertex_count();
    std::vector<Label> ordered(g.labels());
    std::sort(ordered.begin(), ordered.end());

    std::vector<char> free_now(n, 1);  // by internal index
    std::uint64_t free_count = n;

    // phase assignments are pure functions of the seed; evaluate once
    std::vector<std::optional<std::uint32_t>> phase_of_ordered(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i)
        phase_of_ordered[i] = seeds.phase_of(ordered[i]);

    PartitionResult result;
    auto carve = [&](std::vector<Label> comp) {
        std::sort(comp.begin(), comp.end());
        for (Label x : comp) {
            free_now[g.index_of(x)] = 0;
            --free_count;
            result.component_of.emplace(x, std::uint32_t(result.components.size()));
        }
        result.components.push_back(std::move(comp));
    };

    for (std::uint64_t h = 1; h <= params.hbar(); ++h) {
        PhaseStat stat;
        stat.h = h;
        stat.free_at_start = free_count;
        std::vector<char> free_at_start(free_now);

        std::vector<Label> phase_members;  // V_h, ascending label order
        for (std::size_t i = 0; i < ordered.size(); ++i) {
            if (!free_now[g.index_of(ordered[i])]) continue;
            if (phase_of_ordered[i] && *phase_of_ordered[i] == h)
                phase_members.push_back(ordered[i]);
        }
        stat.phased = phase_members.size();

        auto is_free_start = [&](Label x) { return free_at_start[g.index_of(x)] != 0; };
        stat.k_h = findr(g, seeds, h, n, [&](std::uint64_t i) { return g.label_at(i); },
                         is_free_start);

        if (stat.k_h > 0) {
            for (Label v : phase_members) {
                std::uint64_t t_v = seeds.draw_timestep(h, v);
                ClusterResult c = cluster(g, v, t_v, stat.k_h, params);
                for (Label x : c.members)
                    if (is_free_start(x)) ++stat.x_h;
                // connected components of cluster(v) restricted to the
                // currently free set become new pieces
                std::unordered_set<Label> pool;
                for (Label x : c.members)
                    if (free_now[g.index_of(x)]) pool.insert(x);
                while (!pool.empty()) {
                    Label start = *std::min_element(pool.begin(), pool.end());
                    std::vector<Label> comp{start};
                    pool.erase(start);
                    for (std::size_t i = 0; i < comp.size(); ++i)
                        for (Label w : g.neighbors(comp[i]))
                            if (pool.erase(w)) comp.push_back(w);
                    carve(std::move(comp));
                    ++stat.clusters_carved;
                }
            }
        }
        result.phase_stats.push_back(stat);
    }

    // leftovers after the final phase become singletons
    for (Label v : ordered)
        if (free_now[g.index_of(v)]) carve({v});

    for (Label u : ordered)
        for (Label w : g.neighbors(u))
            if (u < w && result.component_of.at(u) != result.component_of.at(w))
                result.cut_edges.emplace_back(u, w);
    return result;
}

std::uint64_t count_cut_edges(const Graph& g, const PartitionResult& p) {
    std::uint64_t cut = 0;
    for (Label u : g.labels()) {
        auto cu = p.component_of.find(u);
        if (cu == p.component_of.end())
            throw std::runtime_error("partition does not cover label " + std::to_string(u));
        for (Label w : g.neighbors(u)) {
            if (u >= w) continue;
            auto cw = p.component_of.find(w);
            if (cw == p.component_of.end())
                throw std::runtime_error("partition does not cover label " + std::to_string(w));
            if (cu->second != cw->second) ++cut;
        }
    }
    return cut;
}

void validate_partition(const Graph& g, const PartitionResult& p, const Params& params) {
    auto fail = [](const std::string& msg) { throw std::runtime_error("partition invalid: " + msg); };
    std::uint64_t covered = 0;
    std::unordered_set<Label> seen;
    const double size_bound = double(params.ell) / params.rho;
    for (std::size_t ci = 0; ci < p.components.size(); ++ci) {
        const auto& comp = p.components[ci];
        if (comp.empty()) fail("empty component");
        if (double(comp.size()) > size_bound)
            fail("component of size " + std::to_string(comp.size()) + " exceeds ell/rho");
        std::unordered_set<Label> in(comp.begin(), comp.end());
        for (Label v : comp) {
            if (!g.contains(v)) fail("component label not in graph");
            if (!seen.insert(v).second) fail("label in two components");
            auto it = p.component_of.find(v);
            if (it == p.component_of.end() || it->second != ci) fail("component_of mismatch");
            ++covered;
        }
        // connectivity by flood fill inside the component
        std::vector<Label> stack{comp.front()};
        std::unordered_set<Label> reached{comp.front()};
        while (!stack.empty()) {
            Label u = stack.back();
            stack.pop_back();
            for (Label w : g.neighbors(u))
                if (in.count(w) && reached.insert(w).second) stack.push_back(w);
        }
        if (reached.size() != comp.size()) fail("disconnected component");
    }
    if (covered != g.vertex_count()) fail("components do not cover V");
    std::set<std::pair<Label, Label>> expected;
    for (Label u : g.labels())
        for (Label w : g.neighbors(u))
            if (u < w && p.component_of.at(u) != p.component_of.at(w)) expected.emplace(u, w);
    std::set<std::pair<Label, Label>> got(p.cut_edges.begin(), p.cut_edges.end());
    if (expected != got) fail("cut_edges is not exactly the crossing-edge set");
}

std::string partition_to_json(const Graph& g, const SeedBundle& seeds,
                              const PartitionResult& p) {
    nlohmann::json j;
    j["n"] = g.vertex_count();
    j["d"] = g.degree_bound();
    const Params& pr = seeds.params();
    j["params"] = {{"epsilon", pr.epsilon}, {"d", pr.d},           {"rho", pr.rho},
                   {"ell", pr.ell},         {"delta", pr.delta},   {"b", pr.b},
                   {"phi", pr.phi},         {"hbar", pr.hbar()},   {"sample_budget", pr.sample_budget},
                   {"findr_fraction", pr.findr_fraction},
                   {"mode", pr.mode == ParamMode::Theory ? "theory" : "practical"}};
    std::ostringstream digest;
    digest << std::hex << seeds.digest();
    j["seed_digest"] = digest.str();
    j["components"] = p.components;
    auto& cuts = j["cut_edges"] = nlohmann::json::array();
    for (auto [u, v] : p.cut_edges) cuts.push_back({u, v});
    auto& stats = j["phase_stats"] = nlohmann::json::array();
    for (const auto& st : p.phase_stats)
        stats.push_back({{"h", st.h},
                         {"free_at_start", st.free_at_start},
                         {"phased", st.phased},
                         {"k_h", st.k_h},
                         {"clusters_carved", st.clusters_carved},
                         {"x_h", st.x_h}});
    return j.dump(2);
}

}  // namespace lrpo
