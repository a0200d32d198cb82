#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "lrpo/graph.hpp"
#include "lrpo/params.hpp"

namespace lrpo {

// The diffusion routines are templated over an access type providing
//   degree_bound(), neighbors(Label) -> span/range of Label, contains(Label)
// so the same code runs on a Graph directly and on the local oracle's
// query-counted cached view.

/// Sparse nonnegative vector over vertex labels; entries sorted by label.
class DiffVector {
public:
    using Entry = std::pair<Label, double>;

    DiffVector() = default;
    static DiffVector indicator(Label v) {
        DiffVector x;
        x.entries_.emplace_back(v, 1.0);
        return x;
    }
    /// Takes entries sorted by label with strictly positive masses.
    static DiffVector from_sorted(std::vector<Entry> entries) {
        DiffVector x;
        x.entries_ = std::move(entries);
        return x;
    }

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    bool contains(Label v) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                                   [](const Entry& e, Label l) { return e.first < l; });
        return it != entries_.end() && it->first == v;
    }
    double mass(Label v) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                                   [](const Entry& e, Label l) { return e.first < l; });
        return (it != entries_.end() && it->first == v) ? it->second : 0.0;
    }
    double total_mass() const {
        double s = 0.0;
        for (const auto& [l, m] : entries_) s += m;
        return s;
    }

private:
    std::vector<Entry> entries_;
};

/// One application of the symmetric lazy walk: each vertex keeps
/// 1 - deg(u)/(2d) of its mass and sends 1/(2d) along every incident edge.
template <class Access>
DiffVector lazy_step(const Access& g, const DiffVector& x) {
    const double dd = 2.0 * double(g.degree_bound());
    std::map<Label, double> acc;  // ordered: deterministic accumulation
    for (const auto& [u, m] : x.entries()) {
        auto nbrs = g.neighbors(u);  // throws on labels outside the graph
        acc[u] += m * (1.0 - double(nbrs.size()) / dd);
        for (Label w : nbrs) acc[w] += m / dd;
    }
    std::vector<DiffVector::Entry> out;
    out.reserve(acc.size());
    for (const auto& [l, m] : acc)
        if (m > 0.0) out.emplace_back(l, m);
    return DiffVector::from_sorted(std::move(out));
}

/// Zeroes out every coordinate with mass <= rho (boundary value removed).
inline DiffVector truncate(const DiffVector& x, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in (0,1)");
    std::vector<DiffVector::Entry> out;
    out.reserve(x.entries().size());
    for (const auto& e : x.entries())
        if (e.second > rho) out.push_back(e);
    return DiffVector::from_sorted(std::move(out));
}

/// Incrementally evaluated truncated diffusion from a start vertex.
template <class Access>
class DiffusionWalk {
public:
    DiffusionWalk(const Access& g, Label v, double rho)
        : g_(&g), rho_(rho), x_(DiffVector::indicator(v)) {}
    const DiffVector& vec() const { return x_; }
    void step() { x_ = truncate(lazy_step(*g_, x_), rho_); }

private:
    const Access* g_;
    double rho_;
    DiffVector x_;
};

/// t alternations of lazy step and truncation from the indicator of v.
template <class Access>
DiffVector trunc_diffusion(const Access& g, Label v, std::uint64_t t, double rho) {
    DiffusionWalk<Access> walk(g, v, rho);
    for (std::uint64_t i = 0; i < t; ++i) walk.step();
    return walk.vec();
}

/// Entries ordered by (mass descending, label ascending).
inline std::vector<DiffVector::Entry> mass_order(const DiffVector& x) {
    std::vector<DiffVector::Entry> order(x.entries());
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return order;
}

/// The k largest-mass labels, smaller label first on ties; the whole support
/// when it has fewer than k entries.
inline std::vector<Label> level_set(const DiffVector& x, std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("level set size must be >= 1");
    auto order = mass_order(x);
    if (order.size() > k) order.resize(k);
    std::vector<Label> out;
    out.reserve(order.size());
    for (const auto& [l, m] : order) out.push_back(l);
    return out;
}

/// Phi(S) = |E(S, V\S)| / (d * |S|).
template <class Access>
double conductance(const Access& g, std::span<const Label> members) {
    if (members.empty()) throw std::domain_error("conductance of an empty set");
    std::unordered_set<Label> in(members.begin(), members.end());
    std::uint64_t boundary = 0;
    for (Label u : in)
        for (Label w : g.neighbors(u))
            if (!in.count(w)) ++boundary;
    return double(boundary) / (double(g.degree_bound()) * double(in.size()));
}

struct ClusterResult {
    std::vector<Label> members;  // sorted by label
    Label center = 0;
    std::uint64_t t_used = 0;
    std::uint64_t k_used = 0;  // 0 when singleton
    std::optional<double> conductance;
    bool is_singleton = false;
};

/// Per-prefix acceptance data for the level sets of one diffusion vector,
/// with the center vertex forced into every candidate set. Shared by
/// cluster() and the findr viability scans so both see identical candidates.
struct LevelScan {
    std::vector<DiffVector::Entry> order;  // mass order of the support
    std::vector<char> gap_ok;     // [j]: prefix of size j+1 is value-determined
    std::vector<double> phi;      // [j]: Phi(L_{j+1} u {v})
    std::vector<std::uint32_t> set_size;  // [j]: |L_{j+1} u {v}|
};

template <class Access>
LevelScan scan_levels(const Access& g, const DiffVector& x, Label v, std::uint64_t kmax) {
    LevelScan s;
    s.order = mass_order(x);
    std::size_t limit = std::min<std::size_t>(s.order.size(), kmax);
    s.gap_ok.resize(limit);
    s.phi.resize(limit);
    s.set_size.resize(limit);
    std::unordered_set<Label> in;
    in.insert(v);
    std::int64_t boundary = std::int64_t(g.neighbors(v).size());
    const double dd = double(g.degree_bound());
    for (std::size_t j = 0; j < limit; ++j) {
        Label w = s.order[j].first;
        if (!in.count(w)) {
            std::int64_t into = 0;
            for (Label z : g.neighbors(w))
                if (in.count(z)) ++into;
            boundary += std::int64_t(g.neighbors(w).size()) - 2 * into;
            in.insert(w);
        }
        s.gap_ok[j] = (j + 1 == s.order.size()) ||
                      (s.order[j].second > s.order[j + 1].second);
        s.phi[j] = double(boundary) / (dd * double(in.size()));
        s.set_size[j] = std::uint32_t(in.size());
    }
    return s;
}

/// Scans k' = k..2k in increasing order over a precomputed truncated
/// diffusion vector and accepts the first level set that is value-determined
/// (strict mass gap at the cut rank, or the full support) and has
/// conductance below phi once v is adjoined. Falls back to the singleton {v}.
template <class Access>
ClusterResult cluster_from_vector(const Access& g, const DiffVector& x, Label v,
                                  std::uint64_t t, std::uint64_t k, const Params& params) {
    if (k < 1) throw std::invalid_argument("cluster threshold must be >= 1");
    LevelScan scan = scan_levels(g, x, v, 2 * k);
    ClusterResult r;
    r.center = v;
    r.t_used = t;
    for (std::uint64_t kp = k; kp <= 2 * k; ++kp) {
        std::size_t j = std::min<std::size_t>(kp, scan.order.size());
        if (j == 0) {
            // empty support: the level set is vacuously the full support
            double phi0 = conductance(g, std::span<const Label>(&v, 1));
            if (phi0 < params.phi) {
                r.members = {v};
                r.k_used = kp;
                r.conductance = phi0;
                return r;
            }
            break;
        }
        if (scan.gap_ok[j - 1] && scan.phi[j - 1] < params.phi) {
            r.members.reserve(j + 1);
            bool has_v = false;
            for (std::size_t i = 0; i < j; ++i) {
                r.members.push_back(scan.order[i].first);
                has_v |= scan.order[i].first == v;
            }
            if (!has_v) r.members.push_back(v);
            std::sort(r.members.begin(), r.members.end());
            r.k_used = kp;
            r.conductance = scan.phi[j - 1];
            return r;
        }
    }
    r.members = {v};
    r.is_singleton = true;
    return r;
}

/// The t-step truncated diffusion from v, then the level-set scan above.
template <class Access>
ClusterResult cluster(const Access& g, Label v, std::uint64_t t, std::uint64_t k,
                      const Params& params) {
    return cluster_from_vector(g, trunc_diffusion(g, v, t, params.rho), v, t, k, params);
}

/// Breadth-first ball of radius `radius` around v, sorted by label.
template <class Access>
std::vector<Label> bfs_ball(const Access& g, Label v, std::uint64_t radius) {
    std::unordered_set<Label> seen{v};
    std::vector<Label> frontier{v};
    for (std::uint64_t depth = 0; depth < radius && !frontier.empty(); ++depth) {
        std::vector<Label> next;
        for (Label u : frontier)
            for (Label w : g.neighbors(u))
                if (seen.insert(w).second) next.push_back(w);
        frontier = std::move(next);
    }
    std::vector<Label> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// All w whose truncated diffusion reaches v within ell steps. Only vertices
/// within graph distance ell can reach v, so the search space is the ball.
template <class Access>
std::vector<Label> inverse_ball(const Access& g, Label v, const Params& params) {
    std::vector<Label> out;
    for (Label w : bfs_ball(g, v, params.ell)) {
        if (w == v) {  // t = 0 support is the indicator
            out.push_back(w);
            continue;
        }
        DiffusionWalk<Access> walk(g, w, params.rho);
        for (std::uint64_t t = 1; t <= params.ell; ++t) {
            walk.step();
            if (walk.vec().empty()) break;
            if (walk.vec().contains(v)) {
                out.push_back(w);
                break;
            }
        }
    }
    return out;
}

}  // namespace lrpo
