#include "lrpo/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace lrpo {

CycleLabeling CycleLabeling::from_labels(std::vector<Label> labels) {
    CycleLabeling L;
    if (labels.size() < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
    L.labels = std::move(labels);
    L.position.reserve(L.labels.size());
    for (std::size_t i = 0; i < L.labels.size(); ++i)
        if (!L.position.emplace(L.labels[i], i).second)
            throw std::invalid_argument("duplicate cycle label");
    return L;
}

CycleLabeling CycleLabeling::sorted_identity(std::uint64_t n) {
    std::vector<Label> labels(n);
    std::iota(labels.begin(), labels.end(), Label(1));
    return from_labels(std::move(labels));
}

std::string rank_pattern(std::span<const Label> args) {
    std::vector<std::size_t> idx(args.size());
    std::iota(idx.begin(), idx.end(), std::size_t(0));
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return args[a] < args[b]; });
    std::vector<std::size_t> rank(args.size());
    for (std::size_t r = 0; r < idx.size(); ++r) rank[idx[r]] = r;
    std::string out;
    for (std::size_t i = 0; i < rank.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(rank[i]);
    }
    return out;
}

namespace {

std::size_t pattern_arity(const std::string& key) {
    if (key.empty()) return 0;
    return std::size_t(std::count(key.begin(), key.end(), ',')) + 1;
}

bool pattern_is_permutation(const std::string& key, std::size_t arity) {
    std::vector<char> seen(arity, 0);
    std::stringstream ss(key);
    std::string part;
    std::size_t count = 0;
    while (std::getline(ss, part, ',')) {
        std::size_t v = 0;
        try {
            v = std::stoul(part);
        } catch (...) {
            return false;
        }
        if (v >= arity || seen[v]) return false;
        seen[v] = 1;
        ++count;
    }
    return count == arity;
}

void validate_node(const CanonicalNode& node, std::uint32_t q, std::uint32_t depth) {
    std::size_t arity = std::size_t(depth) * (2 * q + 1);
    if (node.leaf) {
        if (depth > q + 1) throw std::invalid_argument("leaf deeper than q+1");
        for (const auto& [key, val] : node.cut_map)
            if (pattern_arity(key) != arity || !pattern_is_permutation(key, arity))
                throw std::invalid_argument("leaf pattern arity mismatch at depth " +
                                            std::to_string(depth));
        return;
    }
    if (depth > q) throw std::invalid_argument("internal node deeper than q");
    for (const auto& [key, val] : node.index_map) {
        if (pattern_arity(key) != arity || !pattern_is_permutation(key, arity))
            throw std::invalid_argument("node pattern arity mismatch at depth " +
                                        std::to_string(depth));
        if (val < 1) throw std::invalid_argument("label-query index must be >= 1");
        if (!node.children.count(val))
            throw std::invalid_argument("missing child for emitted index " + std::to_string(val));
    }
    if (node.default_index < 1) throw std::invalid_argument("default index must be >= 1");
    if (!node.children.count(node.default_index))
        throw std::invalid_argument("missing child for the default index");
    for (const auto& [idx, child] : node.children) {
        if (!child) throw std::invalid_argument("null child");
        validate_node(*child, q, depth + 1);
    }
}

// gathered window of 2q+1 labels around a position, in cycle order
void append_window(const CycleLabeling& L, std::size_t pos, std::uint32_t q,
                   std::vector<Label>& out) {
    std::uint64_t n = L.size();
    for (std::int64_t off = -std::int64_t(q); off <= std::int64_t(q); ++off) {
        std::size_t p = std::size_t((std::int64_t(pos) + off % std::int64_t(n) +
                                     std::int64_t(n)) % std::int64_t(n));
        out.push_back(L.labels[p]);
    }
}

}  // namespace

void TreeFamily::validate() const {
    if (q < 1) throw std::invalid_argument("q must be >= 1");
    if (trees.size() != (std::size_t(1) << r_bits))
        throw std::invalid_argument("family must hold exactly 2^r trees");
    for (const auto& t : trees) {
        if (!t.root) throw std::invalid_argument("tree without root");
        validate_node(*t.root, q, 1);
    }
}

bool run_canonical_oracle(const TreeFamily& family, std::size_t tree_index,
                          const CycleLabeling& labeling, Label u, std::uint64_t* queries) {
    if (tree_index >= family.trees.size()) throw std::out_of_range("tree index");
    auto posit = labeling.position.find(u);
    if (posit == labeling.position.end())
        throw std::invalid_argument("label not on the cycle");
    const std::uint32_t q = family.q;
    const std::uint64_t query_cap = std::uint64_t(q + 1) * (2 * q) + q;
    std::uint64_t used = 0;
    auto charge = [&](std::uint64_t c) {
        used += c;
        if (used > query_cap)
            throw std::logic_error("canonical oracle exceeded its query budget");
    };

    std::vector<std::size_t> seed_positions{posit->second};
    charge(2 * q);  // neighbor queries discovering the input's window
    const CanonicalNode* node = family.trees[tree_index].root.get();
    while (true) {
        std::vector<Label> args;
        args.reserve(seed_positions.size() * (2 * q + 1));
        for (std::size_t pos : seed_positions) append_window(labeling, pos, q, args);
        std::string pattern = rank_pattern(args);
        if (node->leaf) {
            auto it = node->cut_map.find(pattern);
            if (queries) *queries = used;
            return it != node->cut_map.end() ? it->second : node->default_cut;
        }
        auto it = node->index_map.find(pattern);
        std::uint64_t idx = it != node->index_map.end() ? it->second : node->default_index;
        if (idx < 1 || idx > labeling.size())
            throw std::invalid_argument("emitted label-query index outside [1, n]");
        charge(1);  // the label query
        std::size_t new_pos = std::size_t(idx - 1);  // label_query(idx) sits at position idx-1
        if (std::find(seed_positions.begin(), seed_positions.end(), new_pos) ==
            seed_positions.end())
            charge(2 * q);  // window of a seed not gathered before
        seed_positions.push_back(new_pos);
        auto child = node->children.find(idx);
        if (child == node->children.end())
            throw std::invalid_argument("missing child for emitted index");
        node = child->second.get();
    }
}

std::set<std::uint64_t> enumerate_seed_indices(const TreeFamily& family) {
    family.validate();
    std::set<std::uint64_t> out;
    // walk with explicit depth so each node's pattern-space size is right
    struct Item {
        const CanonicalNode* node;
        std::uint32_t depth;
    };
    for (const auto& t : family.trees) {
        std::vector<Item> stack{{t.root.get(), 1}};
        while (!stack.empty()) {
            auto [node, depth] = stack.back();
            stack.pop_back();
            if (node->leaf) continue;
            std::size_t arity = std::size_t(depth) * (2 * family.q + 1);
            for (const auto& [key, val] : node->index_map) out.insert(val);
            bool covered = false;
            if (arity <= 20) {
                std::uint64_t space = 1;
                for (std::uint64_t i = 2; i <= arity; ++i) space *= i;
                covered = node->index_map.size() >= space;
            }
            if (!covered) out.insert(node->default_index);
            for (const auto& [idx, child] : node->children)
                stack.push_back({child.get(), depth + 1});
        }
    }
    return out;
}

ChunkReport compute_chunks(std::uint64_t n, std::uint32_t q,
                           const std::set<std::uint64_t>& seed_indices) {
    if (n < 3) throw std::invalid_argument("cycle too small");
    ChunkReport report;
    std::set<std::uint64_t> seeds(seed_indices);
    for (std::uint64_t s : seeds)
        if (s < 1 || s > n) throw std::invalid_argument("seed index outside [1, n]");
    seeds.insert(1);  // lowest label
    seeds.insert(n);  // largest label (its cycle neighbor)
    report.entire_seed_set.assign(seeds.begin(), seeds.end());

    std::vector<char> deleted(n + 1, 0);
    for (std::uint64_t s : seeds) {
        for (std::int64_t off = -std::int64_t(q); off <= std::int64_t(q); ++off) {
            std::int64_t p = (std::int64_t(s) - 1 + off) % std::int64_t(n);
            if (p < 0) p += std::int64_t(n);
            deleted[std::uint64_t(p) + 1] = 1;
        }
    }
    // positions 1 and n are always deleted, so surviving runs never wrap
    std::uint64_t run_start = 0;
    for (std::uint64_t pos = 1; pos <= n + 1; ++pos) {
        bool alive = pos <= n && !deleted[pos];
        if (alive && run_start == 0) run_start = pos;
        if (!alive && run_start != 0) {
            std::uint64_t len = pos - run_start;
            if (len > std::uint64_t(q) * q) {
                report.chunks.emplace_back(run_start, pos - 1);
                report.covered += len;
            }
            run_start = 0;
        }
    }
    return report;
}

UniformityReport verify_chunk_uniformity(const TreeFamily& family,
                                         const CycleLabeling& labeling) {
    family.validate();
    UniformityReport rep;
    rep.n = labeling.size();
    auto seeds = enumerate_seed_indices(family);
    rep.seed_count = seeds.size();
    rep.seed_bound_log2 = double(family.r_bits) +
                          5.0 * std::pow(double(family.q), 3) * std::log2(double(family.q));
    rep.chunks = compute_chunks(rep.n, family.q, seeds);
    rep.all_uniform = true;
    std::uint64_t uniform_covered = 0;
    for (std::size_t ti = 0; ti < family.trees.size(); ++ti) {
        std::uint64_t cut_count = 0;
        for (std::uint64_t pos = 1; pos <= rep.n; ++pos)
            cut_count += run_canonical_oracle(family, ti, labeling, labeling.labels[pos - 1]);
        rep.observed_cut_fraction.push_back(double(cut_count) / double(rep.n));
        for (const auto& [a, b] : rep.chunks.chunks) {
            ChunkVerdict v;
            v.tree_index = ti;
            v.chunk = {a, b};
            v.uniform = true;
            bool first = true;
            for (std::uint64_t pos = a; pos <= b; ++pos) {
                bool cut = run_canonical_oracle(family, ti, labeling, labeling.labels[pos - 1]);
                if (first) {
                    v.output = cut;
                    first = false;
                } else if (cut != v.output) {
                    v.uniform = false;
                    break;
                }
            }
            rep.all_uniform = rep.all_uniform && v.uniform;
            rep.verdicts.push_back(v);
        }
    }
    // a chunk uniform under every tree must be all-cut for a valid oracle
    for (const auto& [a, b] : rep.chunks.chunks) {
        bool uniform_everywhere = true;
        for (const auto& v : rep.verdicts)
            if (v.chunk == std::make_pair(a, b) && !v.uniform) uniform_everywhere = false;
        if (uniform_everywhere) uniform_covered += b - a + 1;
    }
    rep.implied_cut_fraction = double(uniform_covered) / double(rep.n);
    return rep;
}

UniformityReport verify_chunk_uniformity(const TreeFamily& family, std::uint64_t n) {
    return verify_chunk_uniformity(family, CycleLabeling::sorted_identity(n));
}

namespace {

nlohmann::json node_to_json(const CanonicalNode& node) {
    nlohmann::json j;
    if (node.leaf) {
        j["type"] = "leaf";
        j["map"] = node.cut_map;
        j["default"] = node.default_cut;
        return j;
    }
    j["type"] = "node";
    j["map"] = node.index_map;
    j["default"] = node.default_index;
    auto& ch = j["children"] = nlohmann::json::object();
    for (const auto& [idx, child] : node.children) ch[std::to_string(idx)] = node_to_json(*child);
    return j;
}

std::unique_ptr<CanonicalNode> node_from_json(const nlohmann::json& j) {
    auto node = std::make_unique<CanonicalNode>();
    std::string type = j.at("type").get<std::string>();
    if (type == "leaf") {
        node->leaf = true;
        if (j.contains("map")) node->cut_map = j["map"].get<std::map<std::string, bool>>();
        node->default_cut = j.value("default", false);
        return node;
    }
    if (type != "node") throw std::invalid_argument("node type must be 'node' or 'leaf'");
    if (j.contains("map"))
        node->index_map = j["map"].get<std::map<std::string, std::uint64_t>>();
    node->default_index = j.value("default", std::uint64_t(1));
    if (j.contains("children"))
        for (const auto& [key, child] : j["children"].items())
            node->children.emplace(std::stoull(key), node_from_json(child));
    return node;
}

}  // namespace

TreeFamily family_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    TreeFamily f;
    f.q = j.at("q").get<std::uint32_t>();
    f.r_bits = j.at("r").get<std::uint32_t>();
    for (const auto& t : j.at("trees")) {
        CanonicalTree tree;
        tree.root = node_from_json(t.at("root"));
        f.trees.push_back(std::move(tree));
    }
    f.validate();
    return f;
}

TreeFamily family_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open family file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return family_from_json_text(ss.str());
}

std::string family_to_json_text(const TreeFamily& family) {
    nlohmann::json j;
    j["q"] = family.q;
    j["r"] = family.r_bits;
    auto& trees = j["trees"] = nlohmann::json::array();
    for (const auto& t : family.trees) trees.push_back({{"root", node_to_json(*t.root)}});
    return j.dump(2);
}

TreeFamily make_constant_family(std::uint32_t q, std::uint32_t r, bool cut) {
    TreeFamily f;
    f.q = q;
    f.r_bits = r;
    for (std::size_t i = 0; i < (std::size_t(1) << r); ++i) {
        CanonicalTree t;
        t.root = std::make_unique<CanonicalNode>();
        t.root->leaf = true;
        t.root->default_cut = cut;
        f.trees.push_back(std::move(t));
    }
    f.validate();
    return f;
}

TreeFamily make_local_min_family(std::uint32_t q, std::uint32_t r) {
    TreeFamily f;
    f.q = q;
    f.r_bits = r;
    std::size_t arity = 2 * std::size_t(q) + 1;
    std::vector<std::size_t> perm(arity);
    std::iota(perm.begin(), perm.end(), std::size_t(0));
    std::map<std::string, bool> cut_map;
    do {
        std::string key;
        for (std::size_t i = 0; i < arity; ++i) {
            if (i) key.push_back(',');
            key += std::to_string(perm[i]);
        }
        cut_map[key] = perm[q] == 0;  // input vertex is its window's minimum
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (std::size_t i = 0; i < (std::size_t(1) << r); ++i) {
        CanonicalTree t;
        t.root = std::make_unique<CanonicalNode>();
        t.root->leaf = true;
        t.root->cut_map = cut_map;
        t.root->default_cut = false;
        f.trees.push_back(std::move(t));
    }
    f.validate();
    return f;
}

TreeFamily make_mixed_family(std::uint32_t q, std::uint32_t r, std::uint64_t index_span) {
    if (index_span < 1) throw std::invalid_argument("index span must be >= 1");
    TreeFamily f;
    f.q = q;
    f.r_bits = r;
    std::size_t arity = 2 * std::size_t(q) + 1;
    for (std::size_t j = 0; j < (std::size_t(1) << r); ++j) {
        CanonicalTree t;
        t.root = std::make_unique<CanonicalNode>();
        auto& root = *t.root;
        root.leaf = false;
        root.default_index = 1;
        std::vector<std::size_t> perm(arity);
        std::iota(perm.begin(), perm.end(), std::size_t(0));
        std::uint64_t count = 0;
        std::set<std::uint64_t> used{root.default_index};
        do {
            std::string key;
            for (std::size_t i = 0; i < arity; ++i) {
                if (i) key.push_back(',');
                key += std::to_string(perm[i]);
            }
            std::uint64_t idx = 1 + (count * 2654435761ull + j * 97ull) % index_span;
            root.index_map[key] = idx;
            used.insert(idx);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (std::uint64_t idx : used) {
            auto leaf = std::make_unique<CanonicalNode>();
            leaf->leaf = true;
            leaf->default_cut = (idx + j) % 2 == 0;
            root.children.emplace(idx, std::move(leaf));
        }
        f.trees.push_back(std::move(t));
    }
    f.validate();
    return f;
}

}  // namespace lrpo
