#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lrpo {

using Label = std::uint64_t;

/// Bounded-degree undirected graph with labels drawn from a universe [1, N]
/// that is decoupled from the vertex count (general-label access model).
/// Immutable after construction; safe to share across threads.
class Graph {
public:
    /// Builds and validates a graph. `labels` fixes the vertex ordering used
    /// by label_query; adjacency slot order is the insertion order of `edges`.
    /// Throws std::invalid_argument on duplicate labels, labels outside
    /// [1, N], self-loops, parallel edges, or degree-bound violations.
    static Graph build(std::uint64_t degree_bound, std::uint64_t label_universe,
                       std::vector<Label> labels,
                       const std::vector<std::pair<Label, Label>>& edges);

    /// Same validation, but takes explicit per-vertex adjacency rows so that
    /// slot order survives save/load round trips.
    static Graph from_adjacency(std::uint64_t degree_bound, std::uint64_t label_universe,
                                std::vector<Label> labels,
                                std::vector<std::vector<Label>> rows);

    std::uint64_t vertex_count() const { return labels_.size(); }
    std::uint64_t degree_bound() const { return d_; }
    std::uint64_t label_universe() const { return universe_; }
    std::uint64_t edge_count() const { return edge_count_; }

    const std::vector<Label>& labels() const { return labels_; }
    Label label_at(std::uint64_t i) const;  // 1-based index
    bool contains(Label v) const { return index_.count(v) != 0; }
    std::uint64_t index_of(Label v) const;  // 0-based internal index

    std::span<const Label> neighbors(Label v) const;
    std::uint64_t degree(Label v) const { return neighbors(v).size(); }

private:
    std::uint64_t d_ = 0;
    std::uint64_t universe_ = 0;
    std::uint64_t edge_count_ = 0;
    std::vector<Label> labels_;
    std::vector<std::vector<Label>> adj_;  // by internal index
    std::unordered_map<Label, std::uint64_t> index_;
};

/// Query handle over a graph implementing the two access-model queries with
/// exact per-handle counting. Counters are atomic so a handle shared between
/// threads still reports exact totals.
class OracleHandle {
public:
    explicit OracleHandle(const Graph& g) : g_(&g) {}

    /// i-th vertex label (1-based) in the graph's fixed ordering.
    Label label_query(std::uint64_t i);

    /// r-th neighbor (1-based slot, r <= d) of the vertex labeled v, or
    /// nullopt when v has fewer than r neighbors.
    std::optional<Label> neighbor_query(Label v, std::uint64_t r);

    std::uint64_t label_queries() const { return label_count_.load(); }
    std::uint64_t neighbor_queries() const { return neighbor_count_.load(); }
    void reset_counters();

    /// When set, every neighbor_query target label is inserted into *sink.
    /// Used by tests to assert locality of oracle explorations.
    void record_targets(std::vector<Label>* sink) { target_sink_ = sink; }

    const Graph& graph() const { return *g_; }

private:
    const Graph* g_;
    std::atomic<std::uint64_t> label_count_{0};
    std::atomic<std::uint64_t> neighbor_count_{0};
    std::vector<Label>* target_sink_ = nullptr;
};

/// Text format: header "n d N", then n lines "label deg nbr1 ... nbrdeg".
/// The loader re-validates every graph invariant and throws on any violation.
Graph load_graph(std::istream& in);
Graph load_graph_file(const std::string& path);
void save_graph(const Graph& g, std::ostream& out);
void save_graph_file(const Graph& g, const std::string& path);

}  // namespace lrpo
