#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "lrpo/generators.hpp"
#include "lrpo/graph.hpp"
#include "lrpo/partition.hpp"

using namespace lrpo;

// ---------------------------------------------------------------------------
// Straightforward sequential reference implementation. Shares only the Graph
// and the SeedBundle draws with the library; diffusion, level sets,
// conductance, viability, findr, and the carving loop are all re-derived
// from the definitions with dense vectors and plain loops.
// ---------------------------------------------------------------------------
namespace reference {

using Masses = std::vector<double>;  // dense, indexed by position in sorted label order

struct Ctx {
    const Graph& g;
    std::vector<Label> sorted;               // ascending labels
    std::map<Label, std::size_t> pos;        // label -> dense index
    explicit Ctx(const Graph& graph) : g(graph), sorted(graph.labels()) {
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) pos[sorted[i]] = i;
    }
};

Masses diffuse(const Ctx& c, Label v, std::uint64_t t, double rho) {
    Masses x(c.sorted.size(), 0.0);
    x[c.pos.at(v)] = 1.0;
    const double dd = 2.0 * double(c.g.degree_bound());
    for (std::uint64_t s = 0; s < t; ++s) {
        Masses y(x.size(), 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {  // ascending label order
            if (x[i] == 0.0) continue;
            Label u = c.sorted[i];
            auto nbrs = c.g.neighbors(u);
            y[i] += x[i] * (1.0 - double(nbrs.size()) / dd);
            for (Label w : nbrs) y[c.pos.at(w)] += x[i] / dd;
        }
        for (auto& m : y)
            if (m <= rho) m = 0.0;
        x = std::move(y);
    }
    return x;
}

std::vector<std::pair<Label, double>> order_by_mass(const Ctx& c, const Masses& x) {
    std::vector<std::pair<Label, double>> entries;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > 0.0) entries.emplace_back(c.sorted[i], x[i]);
    std::stable_sort(entries.begin(), entries.end(), [](auto a, auto b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return entries;
}

double phi_of(const Ctx& c, const std::set<Label>& s) {
    std::uint64_t boundary = 0;
    for (Label u : s)
        for (Label w : c.g.neighbors(u))
            if (!s.count(w)) ++boundary;
    return double(boundary) / (double(c.g.degree_bound()) * double(s.size()));
}

struct RefCluster {
    std::set<Label> members;
    bool singleton = false;
    std::uint64_t k_used = 0;
};

RefCluster ref_cluster(const Ctx& c, Label v, std::uint64_t t, std::uint64_t k,
                       const Params& p) {
    auto order = order_by_mass(c, diffuse(c, v, t, p.rho));
    for (std::uint64_t kp = k; kp <= 2 * k; ++kp) {
        std::size_t j = std::min<std::size_t>(kp, order.size());
        bool determined = j == order.size() || order[j - 1].second > order[j].second;
        if (!determined) continue;
        std::set<Label> members;
        for (std::size_t i = 0; i < j; ++i) members.insert(order[i].first);
        members.insert(v);
        if (phi_of(c, members) < p.phi) return {members, false, kp};
    }
    return {{v}, true, 0};
}

bool ref_is_viable(const Ctx& c, const SeedBundle& seeds, Label v, std::uint64_t k,
                   const std::set<Label>& free) {
    const Params& p = seeds.params();
    double lg = std::log(1.0 / p.beta());
    std::uint64_t need = std::max<std::uint64_t>(
        1, std::uint64_t(std::ceil(p.beta() / (lg * lg) * double(p.ell))));
    double beta3k = p.beta() * p.beta() * p.beta() * double(k);
    std::uint64_t good = 0;
    for (std::uint64_t t = 1; t <= p.ell; ++t) {
        RefCluster cl = ref_cluster(c, v, t, k, p);
        if (cl.singleton) continue;
        std::uint64_t captured = 0;
        for (Label x : cl.members) captured += free.count(x);
        if (double(captured) >= beta3k) ++good;
    }
    return good >= need;
}

std::uint64_t ref_findr(const Ctx& c, const SeedBundle& seeds, std::uint64_t h,
                        const std::set<Label>& free) {
    const Params& p = seeds.params();
    std::vector<Label> sample;
    for (std::uint64_t j = 1; j <= p.sample_budget; ++j) {
        Label s = c.sorted[seeds.sample_vertex(h, j, c.sorted.size()) - 1];
        auto ph = seeds.phase_of(s);
        if (!ph || *ph >= h) sample.push_back(s);
    }
    if (sample.empty()) return 0;
    double beta4 = std::pow(p.beta(), 4);
    double threshold = std::max(12.0 * beta4 * double(sample.size()),
                                p.findr_fraction * double(sample.size()));
    for (std::uint64_t k = 1; k <= p.k_ladder_max(); k *= 2) {
        std::uint64_t count = 0;
        for (Label s : sample) count += ref_is_viable(c, seeds, s, k, free);
        if (count >= 1 && double(count) >= threshold) return k;
    }
    return 0;
}

struct RefPartition {
    std::vector<std::vector<Label>> components;
    std::set<std::pair<Label, Label>> cut_edges;
    std::vector<std::uint64_t> k_h, x_h;
};

RefPartition ref_global_partition(const Ctx& c, const SeedBundle& seeds) {
    const Params& p = seeds.params();
    std::set<Label> free(c.sorted.begin(), c.sorted.end());
    RefPartition out;
    std::map<Label, std::size_t> comp_of;
    auto carve = [&](const std::set<Label>& comp) {
        std::vector<Label> sorted(comp.begin(), comp.end());
        for (Label x : sorted) {
            free.erase(x);
            comp_of[x] = out.components.size();
        }
        out.components.push_back(sorted);
    };
    for (std::uint64_t h = 1; h <= p.hbar(); ++h) {
        std::set<Label> free_start(free);
        std::vector<Label> phased;
        for (Label v : c.sorted)
            if (free.count(v) && seeds.phase_of(v) == h) phased.push_back(v);
        std::uint64_t k_h = ref_findr(c, seeds, h, free_start);
        out.k_h.push_back(k_h);
        std::uint64_t x_h = 0;
        if (k_h > 0) {
            for (Label v : phased) {
                RefCluster cl = ref_cluster(c, v, seeds.draw_timestep(h, v), k_h, p);
                for (Label x : cl.members) x_h += free_start.count(x);
                std::set<Label> pool;
                for (Label x : cl.members)
                    if (free.count(x)) pool.insert(x);
                while (!pool.empty()) {
                    std::set<Label> comp{*pool.begin()};
                    pool.erase(pool.begin());
                    bool grew = true;
                    while (grew) {
                        grew = false;
                        for (Label u : std::vector<Label>(comp.begin(), comp.end()))
                            for (Label w : c.g.neighbors(u))
                                if (pool.count(w)) {
                                    comp.insert(w);
                                    pool.erase(w);
                                    grew = true;
                                }
                    }
                    carve(comp);
                }
            }
        }
        out.x_h.push_back(x_h);
    }
    for (Label v : c.sorted)
        if (free.count(v)) carve({v});
    for (Label u : c.sorted)
        for (Label w : c.g.neighbors(u))
            if (u < w && comp_of.at(u) != comp_of.at(w)) out.cut_edges.emplace(u, w);
    return out;
}

}  // namespace reference

namespace {

Params practical(double phi, double delta = 0.05, std::uint64_t ell = 20, double rho = 0.02) {
    Params p = Params::practical(0.5, 4);
    p.phi = phi;
    p.delta = delta;
    p.ell = ell;
    p.rho = rho;
    return p;
}

}  // namespace

TEST_CASE("findr returns 0 on an empty free set") {
    Graph g = generate_graph(GeneratorKind::Cycle, 40);
    Params p = practical(1.1);
    SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), 3);
    std::uint64_t k = findr(
        g, seeds, 1, g.vertex_count(), [&](std::uint64_t i) { return g.label_at(i); },
        [](Label) { return false; });
    CHECK(k == 0);
}

TEST_CASE("findr picks k=1 on a fully free cycle under a vacuous phi") {
    Graph g = generate_graph(GeneratorKind::Cycle, 40);
    Params p = practical(1.1);
    REQUIRE(p.beta() * p.beta() * p.beta() * 1.0 <= 1.0);
    SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), 3);
    auto all_free = [](Label) { return true; };
    std::uint64_t k = findr(
        g, seeds, 1, g.vertex_count(), [&](std::uint64_t i) { return g.label_at(i); },
        all_free);
    CHECK(k == 1);
    // exhaustive viability cross-check on the sampled vertices
    reference::Ctx ctx(g);
    std::set<Label> free_all(g.labels().begin(), g.labels().end());
    for (std::uint64_t j = 1; j <= p.sample_budget; ++j) {
        Label s = g.label_at(seeds.sample_vertex(1, j, g.vertex_count()));
        auto ph = seeds.phase_of(s);
        if (ph && *ph < 1) continue;
        CHECK(is_viable(g, seeds, s, 1, 1, all_free) ==
              reference::ref_is_viable(ctx, seeds, s, 1, free_all));
    }
}

TEST_CASE("findr equals the exhaustive reference on a 20x20 grid") {
    Graph g = generate_graph(GeneratorKind::Grid, 400);
    Params p = practical(0.45);
    reference::Ctx ctx(g);
    std::set<Label> free_all(g.labels().begin(), g.labels().end());
    auto all_free = [](Label) { return true; };
    for (std::uint64_t seed : {1ull, 9ull}) {
        SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), seed);
        for (std::uint64_t h : {1ull, 2ull}) {
            std::uint64_t got = findr(
                g, seeds, h, g.vertex_count(),
                [&](std::uint64_t i) { return g.label_at(i); }, all_free);
            CHECK(got == reference::ref_findr(ctx, seeds, h, free_all));
        }
    }
}

TEST_CASE("is_viable edge cases") {
    Graph g = generate_graph(GeneratorKind::Cycle, 40);
    // beta^3 * k larger than |F| makes viability impossible
    Params p = practical(1.1);
    p.epsilon = 0.9;  // beta = 0.09, so beta^3 * 2048 = 1.49 > |F| = 1
    SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), 5);
    auto one_free = [&](Label x) { return x == 7; };
    CHECK_FALSE(is_viable(g, seeds, 7, 1, 2048, one_free));
    CHECK_FALSE(is_viable(g, seeds, 7, 1, 1, [](Label) { return false; }));  // F empty

    // single timestep, vacuous phi, need = ceil((beta/ln^2(1/beta))*1) = 1
    Params p1 = practical(1.1);
    p1.ell = 1;
    REQUIRE(p1.viable_timesteps() <= 1);
    SeedBundle seeds1 = SeedBundle::from_short_seed(p1, g.label_universe(), 5);
    CHECK(is_viable(g, seeds1, 7, 1, 1, [](Label) { return true; }));
}

TEST_CASE("is_viable matches the exhaustive reference on the 40-cycle") {
    Graph g = generate_graph(GeneratorKind::Cycle, 40);
    Params p = practical(0.3);
    SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), 11);
    reference::Ctx ctx(g);
    std::set<Label> half_free;
    for (Label v : g.labels())
        if (v % 2 == 0 || v < 15) half_free.insert(v);
    auto is_free = [&](Label x) { return half_free.count(x) != 0; };
    for (Label v : g.labels())
        for (std::uint64_t k : {1ull, 2ull, 4ull})
            CHECK(is_viable(g, seeds, v, 1, k, is_free) ==
                  reference::ref_is_viable(ctx, seeds, v, k, half_free));
}

TEST_CASE("global partition: delta=0 gives all singletons and cuts every edge") {
    Graph g = generate_graph(GeneratorKind::Grid, 64);
    Params p = practical(0.45);
    p.delta = 0.0;
    SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), 2);
    PartitionResult r = global_partition(g, seeds);
    validate_partition(g, r, p);
    CHECK(r.components.size() == g.vertex_count());
    CHECK(r.cut_edges.size() == g.edge_count());
    CHECK(count_cut_edges(g, r) == g.edge_count());
}

TEST_CASE("global partition of a single-vertex graph") {
    Graph g = Graph::build(2, 10, {5}, {});
    Params p = practical(0.45);
    SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), 1);
    PartitionResult r = global_partition(g, seeds);
    validate_partition(g, r, p);
    REQUIRE(r.components.size() == 1);
    CHECK(r.components[0] == std::vector<Label>{5});
    CHECK(r.cut_edges.empty());
}

TEST_CASE("global partition equals the sequential reference byte for byte") {
    struct Case {
        GeneratorKind kind;
        std::uint64_t n;
    };
    for (Case c : {Case{GeneratorKind::Cycle, 64}, Case{GeneratorKind::Grid, 64},
                   Case{GeneratorKind::RandomOuterplanar, 48}}) {
        Graph g = generate_graph(c.kind, c.n, 13);
        Params p = practical(0.45, 0.1, 12, 0.02);
        p.sample_budget = 24;
        SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), 21);
        PartitionResult got = global_partition(g, seeds);
        validate_partition(g, got, p);
        reference::Ctx ctx(g);
        reference::RefPartition ref = reference::ref_global_partition(ctx, seeds);
        REQUIRE(got.components.size() == ref.components.size());
        for (std::size_t i = 0; i < ref.components.size(); ++i)
            CHECK(got.components[i] == ref.components[i]);
        CHECK(std::set<std::pair<Label, Label>>(got.cut_edges.begin(), got.cut_edges.end()) ==
              ref.cut_edges);
        for (std::size_t h = 0; h < ref.k_h.size(); ++h) {
            CHECK(got.phase_stats[h].k_h == ref.k_h[h]);
            CHECK(got.phase_stats[h].x_h == ref.x_h[h]);
        }
    }
}

TEST_CASE("count_cut_edges handles hand partitions and random splits") {
    Graph cyc = generate_graph(GeneratorKind::Cycle, 12);
    PartitionResult singletons;
    for (Label v : cyc.labels()) {
        singletons.component_of[v] = std::uint32_t(singletons.components.size());
        singletons.components.push_back({v});
    }
    CHECK(count_cut_edges(cyc, singletons) == 12);

    PartitionResult whole;
    std::vector<Label> all(cyc.labels());
    std::sort(all.begin(), all.end());
    for (Label v : all) whole.component_of[v] = 0;
    whole.components.push_back(all);
    CHECK(count_cut_edges(cyc, whole) == 0);

    PartitionResult partial;
    partial.components.push_back({1});
    partial.component_of[1] = 0;
    CHECK_THROWS_AS(count_cut_edges(cyc, partial), std::runtime_error);

    Graph grid = generate_graph(GeneratorKind::Grid, 100);
    std::uint64_t state = 44;
    for (int trial = 0; trial < 10; ++trial) {
        PartitionResult r;
        std::map<std::uint32_t, std::vector<Label>> groups;
        for (Label v : grid.labels()) {
            auto cid = std::uint32_t(splitmix64(state) % 7);
            r.component_of[v] = cid;
            groups[cid].push_back(v);
        }
        // brute-force double loop over edges
        std::uint64_t expect = 0;
        for (Label u : grid.labels())
            for (Label w : grid.neighbors(u))
                if (u < w && r.component_of[u] != r.component_of[w]) ++expect;
        CHECK(count_cut_edges(grid, r) == expect);
    }
}

TEST_CASE("partition invariants across generators and seeds") {
    Params p = practical(0.45);
    for (auto kind : {GeneratorKind::Cycle, GeneratorKind::Grid, GeneratorKind::BinaryTree,
                      GeneratorKind::RandomOuterplanar}) {
        Graph g = generate_graph(kind, 128, 31);
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), seed);
            PartitionResult r = global_partition(g, seeds);
            validate_partition(g, r, p);  // connected, disjoint, covering, sized
            // free-set monotonicity
            for (std::size_t h = 1; h < r.phase_stats.size(); ++h)
                CHECK(r.phase_stats[h].free_at_start <= r.phase_stats[h - 1].free_at_start);
        }
    }
}

TEST_CASE("identical seeds give identical partitions") {
    Graph g = generate_graph(GeneratorKind::Grid, 144, 9);
    Params p = practical(0.45);
    SeedBundle a = SeedBundle::from_short_seed(p, g.label_universe(), 77);
    SeedBundle b = SeedBundle::from_short_seed(p, g.label_universe(), 77);
    PartitionResult ra = global_partition(g, a), rb = global_partition(g, b);
    CHECK(ra.components == rb.components);
    CHECK(ra.cut_edges == rb.cut_edges);
    CHECK(partition_to_json(g, a, ra) == partition_to_json(g, b, rb));
}

TEST_CASE("phase-one marginal stays within three pooled sigmas of delta") {
    Graph g = generate_graph(GeneratorKind::Cycle, 200);
    Params p = practical(0.45, 0.3, 8);  // delta = 0.3 so hbar stays small
    const std::uint64_t runs = 300;
    std::uint64_t phased = 0;
    for (std::uint64_t seed = 0; seed < runs; ++seed) {
        SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), 5000 + seed);
        PartitionResult r = global_partition(g, seeds);
        phased += r.phase_stats[0].phased;  // |V_1| with F_1 = V
    }
    double mean = double(phased) / double(runs * 200);
    double sigma = std::sqrt(0.3 * 0.7 / double(runs * 200));
    CHECK(std::abs(mean - 0.3) <= 3.0 * sigma);
}

TEST_CASE("conditional phase marginal matches the published fact") {
    // Pr[phase = h | phase >= h] = delta for every h, measured over labels
    Params p = practical(0.45, 0.25, 8);
    std::vector<std::uint64_t> at(p.hbar() + 1, 0), atleast(p.hbar() + 1, 0);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        SeedBundle seeds = SeedBundle::from_short_seed(p, 1 << 20, 900 + seed);
        for (Label v = 1; v <= 2000; ++v) {
            auto ph = seeds.phase_of(v);
            std::uint64_t val = ph ? *ph : p.hbar() + 1;
            for (std::uint64_t h = 1; h <= p.hbar(); ++h) {
                if (val >= h) ++atleast[h];
                if (val == h) ++at[h];
            }
        }
    }
    for (std::uint64_t h = 1; h <= p.hbar(); ++h) {
        double frac = double(at[h]) / double(atleast[h]);
        double sigma = std::sqrt(0.25 * 0.75 / double(atleast[h]));
        CHECK(std::abs(frac - 0.25) <= 4.0 * sigma);
    }
}

TEST_CASE("viability records carry the exact timestep evidence") {
    Graph g = generate_graph(GeneratorKind::Cycle, 40);
    Params p = practical(0.3);
    SeedBundle seeds = SeedBundle::from_short_seed(p, g.label_universe(), 11);
    auto all_free = [](Label) { return true; };
    for (Label v : {5ull, 20ull, 33ull}) {
        for (std::uint64_t k : {1ull, 2ull, 4ull}) {
            ViabilityRecord rec = viability_record(g, seeds, v, 1, k, all_free);
            CHECK(rec.vertex == v);
            CHECK(rec.needed == std::max<std::uint64_t>(1, p.viable_timesteps()));
            CHECK(rec.viable() == (rec.good_timesteps >= rec.needed));
            CHECK(rec.viable() == is_viable(g, seeds, v, 1, k, all_free));
            // recount by direct cluster calls
            std::uint64_t good = 0;
            double beta3k = std::pow(p.beta(), 3) * double(k);
            for (std::uint64_t t = 1; t <= p.ell; ++t) {
                ClusterResult c = cluster(g, v, t, k, p);
                if (!c.is_singleton && double(c.members.size()) >= beta3k) ++good;
            }
            CHECK(rec.good_timesteps == good);
        }
    }
}
