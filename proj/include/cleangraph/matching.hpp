#pragma once

// Matchings in Cl2(R): the explicit canonical construction (couples of
// self-inverse units cover their cells pairwise; inverse pairs match within
// cells; an odd leftover self-inverse unit pairs its cells consecutively and
// strands one vertex), the closed-form matching number, a validity checker,
// and an exact maximum-matching oracle (blossom algorithm, correct on
// general graphs).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "graph.hpp"
#include "ring.hpp"

namespace cleangraph {

inline constexpr std::uint64_t kDefaultMatchingBudget = 2000;

struct MatchingResult {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    std::vector<std::uint32_t> unsaturated;
    bool perfect = false;

    std::size_t size() const { return edges.size(); }
};

// mu(Cl2(R)) = (2^n - 1)|U|/2 when |U| is even, ((2^n - 1)|U| - 1)/2 when
// |U| is odd.
inline cpp_int matching_number_closed_form(const FactoredRing& ring) {
    if (ring.n() < 2) {
        throw std::domain_error(
            "matching number closed form requires >= 2 local factors");
    }
    cpp_int nv = ring.vertex_count();
    if (nv % 2 != 0) nv -= 1;
    return nv / 2;
}

// The canonical matching. Cells are indexed 0..2^n-2 in the canonical
// idempotent order (cell 0 = unity; cells 2m-1, 2m are complements).
// With phi units:
//  - each couple (u_i, u_j) of consecutive self-inverse units takes
//      (cell 2k-1, u_i)-(cell 2k, u_i)       for k = 1..(2^n-4)/2,
//      (cell 2k-2, u_j)-(cell 2k-1, u_j)     for k = 1..(2^n-2)/2,
//      (cell 0, u_i)-(cell 2^n-2, u_i)  and  (cell 2^n-3, u_i)-(cell 2^n-2, u_j);
//  - each inverse pair (u_p, u_q) takes (c, u_p)-(c, u_q) for every cell c;
//  - an odd leftover self-inverse unit u takes (cell 2i-2, u)-(cell 2i-1, u)
//    for i = 1..(2^n-2)/2, leaving (cell 2^n-2, u) unsaturated. (|U| = 1
//    reduces to exactly this block: consecutive-cell pairing with one
//    stranded vertex.)
inline MatchingResult build_canonical_matching(const CleanGraph& g) {
    const FactoredRing& ring = g.ring();
    if (ring.n() < 2) {
        throw std::domain_error(
            "canonical matching requires >= 2 local factors");
    }
    const std::size_t E = g.num_cells();
    const std::size_t phi = g.phi();
    const UnitTable& units = g.units();
    const std::size_t r = units.self_inverse_count();

    MatchingResult m;
    auto vid = [&](std::size_t cell, std::size_t unit) {
        return static_cast<std::uint32_t>(cell * phi + unit);
    };
    auto emit = [&](std::size_t c1, std::size_t u1, std::size_t c2,
                    std::size_t u2) {
        m.edges.emplace_back(vid(c1, u1), vid(c2, u2));
    };

    for (std::size_t c = 0; c + 1 < r; c += 2) {
        std::size_t ui = c, uj = c + 1;
        // first family: empty when n = 2
        for (std::size_t k = 1; 2 * k + 2 <= E - 1; ++k) {
            emit(2 * k - 1, ui, 2 * k, ui);
        }
        for (std::size_t k = 1; 2 * k <= E - 1; ++k) {
            emit(2 * k - 2, uj, 2 * k - 1, uj);
        }
        emit(0, ui, E - 1, ui);
        emit(E - 2, ui, E - 1, uj);
    }
    for (std::size_t q = 0; q < units.paired_count(); ++q) {
        auto [up, uq] = units.pair_at(q);
        for (std::size_t c = 0; c < E; ++c) {
            emit(c, up, c, uq);
        }
    }
    if (r % 2 == 1) {
        std::size_t u = r - 1;
        for (std::size_t i = 1; 2 * i <= E - 1; ++i) {
            emit(2 * i - 2, u, 2 * i - 1, u);
        }
        m.unsaturated.push_back(vid(E - 1, u));
    }
    m.perfect = m.unsaturated.empty() &&
                2 * m.edges.size() == g.num_vertices();
    return m;
}

// True iff every listed edge is present in the graph and no vertex is used
// twice. The unsaturated list is advisory and not checked.
inline bool verify_matching(const CleanGraph& g, const MatchingResult& m) {
    std::vector<char> used(g.num_vertices(), 0);
    for (const auto& [a, b] : m.edges) {
        if (a >= g.num_vertices() || b >= g.num_vertices()) return false;
        if (a == b) return false;
        if (!g.adjacent_ids(a, b)) return false;
        if (used[a] || used[b]) return false;
        used[a] = used[b] = 1;
    }
    return true;
}

namespace detail {

// Classic blossom-contraction maximum matching (correct on general graphs).
// Neighbor scans iterate adjacency bit rows directly.
class BlossomMatcher {
public:
    explicit BlossomMatcher(const CleanGraph& g)
        : g_(g), n_(g.num_vertices()), match_(n_, -1), p_(n_, -1),
          base_(n_, 0), used_(n_, 0), blossom_(n_, 0) {}

    std::vector<int> run() {
        greedy_init();
        for (std::size_t v = 0; v < n_; ++v) {
            if (match_[v] == -1) {
                int leaf = find_path(static_cast<int>(v));
                if (leaf != -1) augment(leaf);
            }
        }
        return match_;
    }

private:
    void greedy_init() {
        for (std::size_t v = 0; v < n_; ++v) {
            if (match_[v] != -1) continue;
            const std::uint64_t* row = g_.row(v);
            bool done = false;
            for (std::size_t w = 0; w < g_.words() && !done; ++w) {
                std::uint64_t x = row[w];
                while (x) {
                    std::size_t u = (w << 6) + std::countr_zero(x);
                    x &= x - 1;
                    if (match_[u] == -1) {
                        match_[v] = static_cast<int>(u);
                        match_[u] = static_cast<int>(v);
                        done = true;
                        break;
                    }
                }
            }
        }
    }

    void mark_path(int v, int b, int child) {
        while (base_[v] != b) {
            blossom_[base_[v]] = 1;
            blossom_[base_[match_[v]]] = 1;
            p_[v] = child;
            child = match_[v];
            v = p_[match_[v]];
        }
    }

    int lca(int a, int b) {
        std::vector<char> seen(n_, 0);
        int v = a;
        while (true) {
            v = base_[v];
            seen[v] = 1;
            if (match_[v] == -1) break;
            v = p_[match_[v]];
        }
        v = b;
        while (true) {
            v = base_[v];
            if (seen[v]) return v;
            v = p_[match_[v]];
        }
    }

    int find_path(int root) {
        std::fill(used_.begin(), used_.end(), 0);
        std::fill(p_.begin(), p_.end(), -1);
        for (std::size_t i = 0; i < n_; ++i) base_[i] = static_cast<int>(i);
        used_[root] = 1;
        std::vector<int> queue{root};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int v = queue[qi];
            const std::uint64_t* row = g_.row(v);
            for (std::size_t w = 0; w < g_.words(); ++w) {
                std::uint64_t x = row[w];
                while (x) {
                    int to = static_cast<int>((w << 6) + std::countr_zero(x));
                    x &= x - 1;
                    if (base_[v] == base_[to] || match_[v] == to) continue;
                    if (to == root ||
                        (match_[to] != -1 && p_[match_[to]] != -1)) {
                        // odd cycle: contract the blossom
                        int cur = lca(v, to);
                        std::fill(blossom_.begin(), blossom_.end(), 0);
                        mark_path(v, cur, to);
                        mark_path(to, cur, v);
                        for (std::size_t i = 0; i < n_; ++i) {
                            if (blossom_[base_[i]]) {
                                base_[i] = cur;
                                if (!used_[i]) {
                                    used_[i] = 1;
                                    queue.push_back(static_cast<int>(i));
                                }
                            }
                        }
                    } else if (p_[to] == -1) {
                        p_[to] = v;
                        if (match_[to] == -1) return to;
                        used_[match_[to]] = 1;
                        queue.push_back(match_[to]);
                    }
                }
            }
        }
        return -1;
    }

    void augment(int v) {
        while (v != -1) {
            int pv = p_[v];
            int ppv = match_[pv];
            match_[v] = pv;
            match_[pv] = v;
            v = ppv;
        }
    }

    const CleanGraph& g_;
    std::size_t n_;
    std::vector<int> match_, p_, base_;
    std::vector<char> used_, blossom_;
};

}  // namespace detail

inline MatchingResult maximum_matching_oracle(const CleanGraph& g,
                                              std::uint64_t budget =
                                                  kDefaultMatchingBudget) {
    if (g.num_vertices() > budget) {
        throw BudgetError("maximum matching oracle on " +
                          std::to_string(g.num_vertices()) +
                          " vertices exceeds budget " +
                          std::to_string(budget));
    }
    detail::BlossomMatcher bm(g);
    std::vector<int> match = bm.run();
    MatchingResult m;
    for (std::size_t v = 0; v < match.size(); ++v) {
        int u = match[v];
        if (u == -1) {
            m.unsaturated.push_back(static_cast<std::uint32_t>(v));
        } else if (static_cast<std::size_t>(u) > v) {
            m.edges.emplace_back(static_cast<std::uint32_t>(v),
                                 static_cast<std::uint32_t>(u));
        }
    }
    m.perfect = m.unsaturated.empty() &&
                2 * m.edges.size() == g.num_vertices();
    return m;
}

inline nlohmann::ordered_json matching_to_json(const MatchingResult& m) {
    nlohmann::ordered_json j;
    j["size"] = m.edges.size();
    j["perfect"] = m.perfect;
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : m.edges) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    j["unsaturated"] = m.unsaturated;
    return j;
}

// Exhaustive maximum matching size by branch-and-bound over the edge list;
// test-support oracle for tiny graphs.
inline std::size_t exhaustive_maximum_matching_size(
    std::size_t num_vertices,
    const std::vector<std::pair<int, int>>& edges) {
    if (num_vertices > 20) {
        throw std::invalid_argument("exhaustive matcher limited to 20 "
                                    "vertices");
    }
    std::size_t best = 0;
    auto rec = [&](auto&& self, std::size_t idx, std::uint32_t used,
                   std::size_t size) -> void {
        best = std::max(best, size);
        if (idx >= edges.size()) return;
        if (size + (edges.size() - idx) <= best) return;  // can't improve
        auto [a, b] = edges[idx];
        if (!((used >> a) & 1) && !((used >> b) & 1)) {
            self(self, idx + 1,
                 used | (1u << a) | (1u << b), size + 1);
        }
        self(self, idx + 1, used, size);
    };
    rec(rec, 0, 0, 0);
    return best;
}

}  // namespace cleangraph
