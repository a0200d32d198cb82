#pragma once

#include <cstdint>
#include <string>

#include "lrpo/graph.hpp"

namespace lrpo {

enum class GeneratorKind { Cycle, Path, Grid, BinaryTree, RandomOuterplanar };

GeneratorKind generator_from_name(const std::string& name);
std::string generator_name(GeneratorKind kind);

/// Deterministic generators for bounded-degree planar families. When
/// label_universe > n, the n vertex labels are drawn as distinct values from
/// [1, label_universe] by the rng_seed; otherwise labels are 1..n.
/// Grid uses the near-square factorization of n; binary-tree is the complete
/// binary tree shape on n vertices; random-outerplanar adds fan chords over
/// disjoint arcs of a cycle under the degree cap.
Graph generate_graph(GeneratorKind kind, std::uint64_t n, std::uint64_t rng_seed = 0,
                     std::uint64_t label_universe = 0, std::uint64_t degree_cap = 0);

}  // namespace lrpo
