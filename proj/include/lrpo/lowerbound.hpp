#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lrpo/graph.hpp"

namespace lrpo {

/// A labeled n-cycle: position i (0-based) around the cycle carries
/// labels[i]. Label queries use position order, i.e. label_query(i) returns
/// labels[i-1].
struct CycleLabeling {
    std::vector<Label> labels;
    std::unordered_map<Label, std::size_t> position;

    static CycleLabeling from_labels(std::vector<Label> labels);
    static CycleLabeling sorted_identity(std::uint64_t n);  // labels 1..n in order
    std::uint64_t size() const { return labels.size(); }
};

/// Canonical rank pattern of an argument list: args[i] is replaced by the
/// rank of (value, position) under stable ordering, so equal values (which
/// only arise when gathered windows overlap) break ties by position. Two
/// order-isomorphic lists produce identical patterns.
std::string rank_pattern(std::span<const Label> args);

/// Decision-tree node of a comparison-based cut-function oracle. Internal
/// nodes map the rank pattern of all gathered windows to the next
/// label-query index; leaves map it to the cut decision. Patterns absent
/// from a map fall back to the declared defaults.
struct CanonicalNode {
    bool leaf = false;
    std::map<std::string, std::uint64_t> index_map;
    std::uint64_t default_index = 1;
    std::map<std::uint64_t, std::unique_ptr<CanonicalNode>> children;  // keyed by index
    std::map<std::string, bool> cut_map;
    bool default_cut = false;
};

struct CanonicalTree {
    std::unique_ptr<CanonicalNode> root;
};

/// 2^r canonical trees, one picked uniformly before the algorithm starts.
struct TreeFamily {
    std::uint32_t q = 0;
    std::uint32_t r_bits = 0;
    std::vector<CanonicalTree> trees;

    /// Checks tree count, depth <= q+1, pattern arity d_z*(2q+1) at every
    /// node, and that every emitted index has a child. Throws
    /// std::invalid_argument on the first violation.
    void validate() const;
};

/// Runs one tree on one input label: gathers the radius-q window around
/// every collected seed, feeds the induced rank pattern to the node, follows
/// the emitted label-query index, and lets the leaf decide cut / not-cut.
/// Enforces the O(q^2) query budget; *queries (when given) receives the
/// exact count.
bool run_canonical_oracle(const TreeFamily& family, std::size_t tree_index,
                          const CycleLabeling& labeling, Label u,
                          std::uint64_t* queries = nullptr);

/// Union over all trees, nodes, and patterns of the label-query indices the
/// family can ever emit (map values plus reachable defaults).
std::set<std::uint64_t> enumerate_seed_indices(const TreeFamily& family);

struct ChunkReport {
    std::vector<std::uint64_t> entire_seed_set;  // augmented, 1-based positions
    std::vector<std::pair<std::uint64_t, std::uint64_t>> chunks;  // inclusive position ranges
    std::uint64_t covered = 0;
};

/// The deletion procedure on a monotonically labeled n-cycle: augment the
/// seed set with the positions of the lowest and largest labels, delete all
/// positions within cycle distance q of any seed, and drop surviving
/// segments of at most q^2 vertices.
ChunkReport compute_chunks(std::uint64_t n, std::uint32_t q,
                           const std::set<std::uint64_t>& seed_indices);

struct ChunkVerdict {
    std::size_t tree_index = 0;
    std::pair<std::uint64_t, std::uint64_t> chunk;
    bool uniform = false;
    bool output = false;  // the common output when uniform
};

struct UniformityReport {
    std::uint64_t n = 0;
    std::uint64_t seed_count = 0;      // |enumerate_seed_indices|
    double seed_bound_log2 = 0;        // log2(2^r * q^(5 q^3))
    ChunkReport chunks;
    std::vector<ChunkVerdict> verdicts;
    bool all_uniform = false;
    double implied_cut_fraction = 0;   // covered/n once every chunk is uniform
    std::vector<double> observed_cut_fraction;  // per tree, over all n vertices
};

/// Evaluates every tree on every chunk vertex of the sorted labeling and
/// checks that outputs are constant per (tree, chunk). Uniform chunks force
/// a cut on every chunk vertex for any valid oracle (a silent chunk would
/// contain a component longer than q), hence the implied cut fraction.
UniformityReport verify_chunk_uniformity(const TreeFamily& family, std::uint64_t n);
UniformityReport verify_chunk_uniformity(const TreeFamily& family,
                                         const CycleLabeling& labeling);

TreeFamily family_from_json_text(const std::string& text);
TreeFamily family_from_json_file(const std::string& path);
std::string family_to_json_text(const TreeFamily& family);

// Built-in comparison-based demo families.
TreeFamily make_constant_family(std::uint32_t q, std::uint32_t r, bool cut);
/// Depth-0 trees: cut iff the input is the minimum of its radius-q window.
TreeFamily make_local_min_family(std::uint32_t q, std::uint32_t r);
/// Depth-1 trees: the root emits one of a few fixed indices chosen by the
/// input window's pattern; leaves compare the two gathered windows.
TreeFamily make_mixed_family(std::uint32_t q, std::uint32_t r, std::uint64_t index_span);

}  // namespace lrpo
