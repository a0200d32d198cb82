#include <doctest.h>

#include <thread>

#include <set>
#include <sstream>

#include "lrpo/generators.hpp"
#include "lrpo/graph.hpp"

using namespace lrpo;

namespace {

Graph four_cycle() {
    return Graph::build(2, 100, {1, 2, 3, 4}, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
}

}  // namespace

TEST_CASE("label_query returns the stored ordering") {
    Graph g = Graph::build(2, 64, {7, 19, 42}, {{7, 19}, {19, 42}});
    OracleHandle h(g);
    CHECK(h.label_query(2) == 19);
    CHECK(h.label_query(1) == 7);
    CHECK(h.label_queries() == 2);
    CHECK_THROWS_AS(h.label_query(0), std::out_of_range);
    CHECK_THROWS_AS(h.label_query(4), std::out_of_range);
    CHECK(h.label_queries() == 2);  // failed calls are not queries
}

TEST_CASE("label_query enumerates every label exactly once") {
    std::vector<Label> labels;
    for (std::uint64_t i = 0; i < 1000; ++i) labels.push_back(3 * i + 5);
    std::vector<std::pair<Label, Label>> edges;
    for (std::uint64_t i = 0; i + 1 < 1000; ++i) edges.emplace_back(labels[i], labels[i + 1]);
    Graph g = Graph::build(2, 1 << 20, labels, edges);
    OracleHandle h(g);
    std::set<Label> seen;
    for (std::uint64_t i = 1; i <= 1000; ++i) seen.insert(h.label_query(i));
    CHECK(seen.size() == 1000);
    CHECK(seen == std::set<Label>(labels.begin(), labels.end()));
    CHECK(h.label_queries() == 1000);
}

TEST_CASE("neighbor_query follows slot storage order") {
    Graph g = four_cycle();
    OracleHandle h(g);
    CHECK(h.neighbor_query(1, 1) == 2);
    CHECK(h.neighbor_query(1, 2) == 4);
    CHECK(h.neighbor_queries() == 2);
}

TEST_CASE("neighbor_query reports absent slots and rejects bad input") {
    Graph g = Graph::build(2, 10, {1, 2}, {{1, 2}});
    OracleHandle h(g);
    CHECK(h.neighbor_query(1, 2) == std::nullopt);
    CHECK(h.neighbor_queries() == 1);
    CHECK_THROWS_AS(h.neighbor_query(1, 3), std::out_of_range);      // r > d
    CHECK_THROWS_AS(h.neighbor_query(9, 1), std::invalid_argument);  // unknown label
    CHECK(h.neighbor_queries() == 1);
}

TEST_CASE("neighbor answers round-trip on generated graphs") {
    for (auto kind : {GeneratorKind::Cycle, GeneratorKind::Grid, GeneratorKind::BinaryTree,
                      GeneratorKind::RandomOuterplanar}) {
        Graph g = generate_graph(kind, 60, 7);
        OracleHandle h(g);
        for (Label v : g.labels()) {
            for (std::uint64_t r = 1; r <= g.degree_bound(); ++r) {
                auto w = h.neighbor_query(v, r);
                if (!w) break;
                bool found = false;
                for (std::uint64_t r2 = 1; r2 <= g.degree_bound(); ++r2) {
                    if (h.neighbor_query(*w, r2) == v) {
                        found = true;
                        break;
                    }
                }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("query counters are exact and resettable") {
    Graph g = four_cycle();
    OracleHandle h(g);
    for (int i = 0; i < 17; ++i) h.neighbor_query(1, 1);
    for (int i = 0; i < 5; ++i) h.label_query(1);
    CHECK(h.neighbor_queries() == 17);
    CHECK(h.label_queries() == 5);
    h.reset_counters();
    CHECK(h.neighbor_queries() == 0);
    CHECK(h.label_queries() == 0);
}

TEST_CASE("graph validation rejects malformed input") {
    CHECK_THROWS_AS(Graph::build(2, 10, {1, 1}, {}), std::invalid_argument);        // duplicate
    CHECK_THROWS_AS(Graph::build(2, 3, {1, 2, 3, 4}, {}), std::invalid_argument);   // n > N
    CHECK_THROWS_AS(Graph::build(2, 10, {1, 11}, {}), std::invalid_argument);       // label > N
    CHECK_THROWS_AS(Graph::build(2, 10, {0, 1}, {}), std::invalid_argument);        // label < 1
    CHECK_THROWS_AS(Graph::build(2, 10, {1, 2}, {{1, 1}}), std::invalid_argument);  // self-loop
    CHECK_THROWS_AS(Graph::build(2, 10, {1, 2}, {{1, 2}, {2, 1}}),
                    std::invalid_argument);  // parallel edge
    CHECK_THROWS_AS(Graph::build(1, 10, {1, 2, 3}, {{1, 2}, {1, 3}}),
                    std::invalid_argument);  // degree bound
    // asymmetric adjacency through the row constructor
    CHECK_THROWS_AS(Graph::from_adjacency(2, 10, {1, 2}, {{2}, {}}), std::invalid_argument);
}

TEST_CASE("graph file format round-trips with slot order intact") {
    Graph g = generate_graph(GeneratorKind::RandomOuterplanar, 40, 3, 1 << 16);
    std::stringstream buf;
    save_graph(g, buf);
    Graph h = load_graph(buf);
    CHECK(h.vertex_count() == g.vertex_count());
    CHECK(h.degree_bound() == g.degree_bound());
    CHECK(h.label_universe() == g.label_universe());
    CHECK(h.labels() == g.labels());
    for (Label v : g.labels()) {
        auto a = g.neighbors(v), b = h.neighbors(v);
        CHECK(std::vector<Label>(a.begin(), a.end()) == std::vector<Label>(b.begin(), b.end()));
    }
    std::stringstream again, original;
    save_graph(h, again);
    save_graph(g, original);
    CHECK(again.str() == original.str());
}

TEST_CASE("graph loader fails loudly on bad files") {
    std::stringstream missing("3 2 10\n1 1 2\n2 1 1\n");  // claims 3 rows, has 2
    CHECK_THROWS(load_graph(missing));
    std::stringstream asym("2 2 10\n1 1 2\n2 0\n");
    CHECK_THROWS(load_graph(asym));
    std::stringstream overdeg("2 1 10\n1 2 2 2\n2 1 1\n");
    CHECK_THROWS(load_graph(overdeg));
}

TEST_CASE("a handle shared across threads keeps exact totals") {
    Graph g = four_cycle();
    OracleHandle h(g);
    const int threads = 4, per = 5000;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i = 0; i < per; ++i) {
                h.neighbor_query(1, 1);
                h.label_query(2);
            }
        });
    for (auto& th : pool) th.join();
    CHECK(h.neighbor_queries() == std::uint64_t(threads) * per);
    CHECK(h.label_queries() == std::uint64_t(threads) * per);
}
