#include "lrpo/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace lrpo {

Graph Graph::build(std::uint64_t degree_bound, std::uint64_t label_universe,
                   std::vector<Label> labels,
                   const std::vector<std::pair<Label, Label>>& edges) {
    std::unordered_map<Label, std::uint64_t> index;
    for (std::uint64_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
    std::vector<std::vector<Label>> rows(labels.size());
    for (auto [u, v] : edges) {
        auto iu = index.find(u), iv = index.find(v);
        if (iu == index.end() || iv == index.end())
            throw std::invalid_argument("edge endpoint not a vertex label");
        rows[iu->second].push_back(v);
        rows[iv->second].push_back(u);
    }
    return from_adjacency(degree_bound, label_universe, std::move(labels), std::move(rows));
}

Graph Graph::from_adjacency(std::uint64_t degree_bound, std::uint64_t label_universe,
                            std::vector<Label> labels,
                            std::vector<std::vector<Label>> rows) {
    Graph g;
    g.d_ = degree_bound;
    g.universe_ = label_universe;
    if (labels.empty()) throw std::invalid_argument("graph needs at least one vertex");
    if (labels.size() > label_universe)
        throw std::invalid_argument("vertex count exceeds label universe");
    if (rows.size() != labels.size()) throw std::invalid_argument("adjacency size mismatch");
    g.labels_ = std::move(labels);
    g.adj_ = std::move(rows);
    g.index_.reserve(g.labels_.size());
    for (std::uint64_t i = 0; i < g.labels_.size(); ++i) {
        Label v = g.labels_[i];
        if (v < 1 || v > label_universe)
            throw std::invalid_argument("label " + std::to_string(v) + " outside [1, N]");
        if (!g.index_.emplace(v, i).second)
            throw std::invalid_argument("duplicate label " + std::to_string(v));
    }
    std::set<std::pair<Label, Label>> seen;
    for (std::uint64_t i = 0; i < g.adj_.size(); ++i) {
        Label u = g.labels_[i];
        if (g.adj_[i].size() > degree_bound)
            throw std::invalid_argument("degree of label " + std::to_string(u) +
                                        " exceeds bound " + std::to_string(degree_bound));
        for (Label v : g.adj_[i]) {
            if (v == u) throw std::invalid_argument("self-loop at label " + std::to_string(u));
            auto iv = g.index_.find(v);
            if (iv == g.index_.end())
                throw std::invalid_argument("neighbor " + std::to_string(v) +
                                            " is not a vertex label");
            if (u < v && !seen.emplace(u, v).second)
                throw std::invalid_argument("parallel edge between " + std::to_string(u) +
                                            " and " + std::to_string(v));
        }
    }
    // symmetry: u lists v exactly as often as v lists u (and parallel edges
    // are already excluded, so "exactly once each")
    std::uint64_t directed = 0;
    for (std::uint64_t i = 0; i < g.adj_.size(); ++i) {
        Label u = g.labels_[i];
        for (Label v : g.adj_[i]) {
            const auto& back = g.adj_[g.index_.at(v)];
            if (std::count(back.begin(), back.end(), u) != 1)
                throw std::invalid_argument("asymmetric adjacency between " + std::to_string(u) +
                                            " and " + std::to_string(v));
            ++directed;
        }
    }
    g.edge_count_ = directed / 2;
    return g;
}

Label Graph::label_at(std::uint64_t i) const {
    if (i < 1 || i > labels_.size()) throw std::out_of_range("label index out of range");
    return labels_[i - 1];
}

std::uint64_t Graph::index_of(Label v) const {
    auto it = index_.find(v);
    if (it == index_.end())
        throw std::invalid_argument("unknown label " + std::to_string(v));
    return it->second;
}

std::span<const Label> Graph::neighbors(Label v) const {
    return adj_[index_of(v)];
}

Label OracleHandle::label_query(std::uint64_t i) {
    Label out = g_->label_at(i);  // throws before counting on a bad index
    label_count_.fetch_add(1, std::memory_order_relaxed);
    return out;
}

std::optional<Label> OracleHandle::neighbor_query(Label v, std::uint64_t r) {
    if (r < 1 || r > g_->degree_bound()) throw std::out_of_range("neighbor slot out of range");
    auto nbrs = g_->neighbors(v);  // throws on unknown label
    neighbor_count_.fetch_add(1, std::memory_order_relaxed);
    if (target_sink_) target_sink_->push_back(v);
    if (r > nbrs.size()) return std::nullopt;
    return nbrs[r - 1];
}

void OracleHandle::reset_counters() {
    label_count_.store(0);
    neighbor_count_.store(0);
}

Graph load_graph(std::istream& in) {
    std::uint64_t n = 0, d = 0, universe = 0;
    if (!(in >> n >> d >> universe)) throw std::runtime_error("graph header unreadable");
    std::vector<Label> labels(n);
    std::vector<std::vector<Label>> rows(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t deg = 0;
        if (!(in >> labels[i] >> deg)) throw std::runtime_error("truncated graph row");
        if (deg > d) throw std::runtime_error("row degree exceeds bound");
        rows[i].resize(deg);
        for (auto& w : rows[i])
            if (!(in >> w)) throw std::runtime_error("truncated adjacency row");
    }
    return Graph::from_adjacency(d, universe, std::move(labels), std::move(rows));
}

Graph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file " + path);
    return load_graph(in);
}

void save_graph(const Graph& g, std::ostream& out) {
    out << g.vertex_count() << ' ' << g.degree_bound() << ' ' << g.label_universe() << '\n';
    for (Label v : g.labels()) {
        auto nbrs = g.neighbors(v);
        out << v << ' ' << nbrs.size();
        for (Label w : nbrs) out << ' ' << w;
        out << '\n';
    }
}

void save_graph_file(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    save_graph(g, out);
}

}  // namespace lrpo
