#include "lrpo/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "lrpo/seeds.hpp"

namespace lrpo {

GeneratorKind generator_from_name(const std::string& name) {
    if (name == "cycle") return GeneratorKind::Cycle;
    if (name == "path") return GeneratorKind::Path;
    if (name == "grid") return GeneratorKind::Grid;
    if (name == "binary-tree") return GeneratorKind::BinaryTree;
    if (name == "random-outerplanar") return GeneratorKind::RandomOuterplanar;
    throw std::invalid_argument("unknown generator '" + name + "'");
}

std::string generator_name(GeneratorKind kind) {
    switch (kind) {
        case GeneratorKind::Cycle: return "cycle";
        case GeneratorKind::Path: return "path";
        case GeneratorKind::Grid: return "grid";
        case GeneratorKind::BinaryTree: return "binary-tree";
        case GeneratorKind::RandomOuterplanar: return "random-outerplanar";
    }
    throw std::invalid_argument("unknown generator kind");
}

namespace {

std::vector<Label> draw_labels(std::uint64_t n, std::uint64_t universe, std::uint64_t rng_seed) {
    std::vector<Label> labels(n);
    if (universe <= n) {
        std::iota(labels.begin(), labels.end(), Label(1));
        return labels;
    }
    std::set<Label> chosen;
    std::uint64_t state = rng_seed ^ 0x7f4a7c15ull;
    while (chosen.size() < n) chosen.insert(1 + splitmix64(state) % universe);
    labels.assign(chosen.begin(), chosen.end());
    return labels;
}

}  // namespace

Graph generate_graph(GeneratorKind kind, std::uint64_t n, std::uint64_t rng_seed,
                     std::uint64_t label_universe, std::uint64_t degree_cap) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::uint64_t universe = std::max(label_universe, n);
    std::vector<Label> labels = draw_labels(n, universe, rng_seed);
    auto lab = [&](std::uint64_t i) { return labels[i]; };  // 0-based position -> label
    std::vector<std::pair<Label, Label>> edges;
    std::uint64_t d = 0;
    switch (kind) {
        case GeneratorKind::Cycle: {
            d = 2;
            for (std::uint64_t i = 0; i + 1 < n; ++i) edges.emplace_back(lab(i), lab(i + 1));
            if (n > 2) edges.emplace_back(lab(n - 1), lab(0));
            break;
        }
        case GeneratorKind::Path: {
            d = 2;
            for (std::uint64_t i = 0; i + 1 < n; ++i) edges.emplace_back(lab(i), lab(i + 1));
            break;
        }
        case GeneratorKind::Grid: {
            d = 4;
            std::uint64_t rows = std::uint64_t(std::sqrt(double(n)));
            while (rows > 1 && n % rows != 0) --rows;
            std::uint64_t cols = n / rows;
            auto at = [&](std::uint64_t r, std::uint64_t c) { return lab(r * cols + c); };
            for (std::uint64_t r = 0; r < rows; ++r)
                for (std::uint64_t c = 0; c < cols; ++c) {
                    if (c + 1 < cols) edges.emplace_back(at(r, c), at(r, c + 1));
                    if (r + 1 < rows) edges.emplace_back(at(r, c), at(r + 1, c));
                }
            break;
        }
        case GeneratorKind::BinaryTree: {
            d = 3;
            for (std::uint64_t i = 1; i < n; ++i) edges.emplace_back(lab((i - 1) / 2), lab(i));
            break;
        }
        case GeneratorKind::RandomOuterplanar: {
            d = degree_cap ? degree_cap : 6;
            if (d < 4) throw std::invalid_argument("outerplanar degree cap must be >= 4");
            std::vector<std::uint64_t> degree(n, 0);
            for (std::uint64_t i = 0; i + 1 < n; ++i) edges.emplace_back(lab(i), lab(i + 1));
            if (n > 2) edges.emplace_back(lab(n - 1), lab(0));
            for (std::uint64_t i = 0; i < n && n > 2; ++i) degree[i] = 2;
            // fans over disjoint arcs: chords stay non-crossing, so the
            // graph remains outerplanar by construction
            std::uint64_t state = rng_seed ^ 0x9e3779b9ull;
            std::uint64_t cursor = 0;
            while (n > 4 && cursor + 4 < n) {
                std::uint64_t len = 3 + splitmix64(state) % std::min<std::uint64_t>(d - 2, 6);
                std::uint64_t end = std::min(cursor + len, n - 1);
                for (std::uint64_t j = cursor + 2; j <= end; ++j) {
                    if (degree[cursor] >= d || degree[j] >= d) break;  // over-degree ear rejected
                    edges.emplace_back(lab(cursor), lab(j));
                    ++degree[cursor];
                    ++degree[j];
                }
                cursor = end + 1 + splitmix64(state) % 3;
            }
            break;
        }
    }
    if (degree_cap) d = std::max(d, degree_cap);
    return Graph::build(d, universe, labels, edges);
}

}  // namespace lrpo
