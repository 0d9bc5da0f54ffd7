#pragma once

// The clean graph Cl2(R): vertices are (nonzero idempotent, unit) pairs,
// edges join distinct vertices with e*f = 0 or u*v = 1. Adjacency is stored
// as N rows of N bits. BFS routines are structure-blind (they read only the
// bit matrix) but direction-optimized: small frontiers expand top-down,
// large ones bottom-up with early-exit word intersection.

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ring.hpp"

namespace cleangraph {

inline constexpr std::uint64_t kDefaultVertexBudget = 50000;

struct CleanVertex {
    std::size_t idem_index = 0;
    std::size_t unit_index = 0;

    bool operator==(const CleanVertex& o) const {
        return idem_index == o.idem_index && unit_index == o.unit_index;
    }
};

namespace bits {

inline std::size_t words_for(std::size_t nbits) { return (nbits + 63) / 64; }

inline void set_bit(std::uint64_t* row, std::size_t j) {
    row[j >> 6] |= std::uint64_t(1) << (j & 63);
}

inline bool test_bit(const std::uint64_t* row, std::size_t j) {
    return (row[j >> 6] >> (j & 63)) & 1;
}

inline void set_range(std::uint64_t* row, std::size_t lo, std::size_t hi) {
    // set bits [lo, hi)
    if (lo >= hi) return;
    std::size_t wl = lo >> 6, wh = (hi - 1) >> 6;
    std::uint64_t ml = ~0ull << (lo & 63);
    std::uint64_t mh = ~0ull >> (63 - ((hi - 1) & 63));
    if (wl == wh) {
        row[wl] |= ml & mh;
        return;
    }
    row[wl] |= ml;
    for (std::size_t w = wl + 1; w < wh; ++w) row[w] = ~0ull;
    row[wh] |= mh;
}

inline std::size_t popcount(const std::uint64_t* row, std::size_t words) {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words; ++w) c += std::popcount(row[w]);
    return c;
}

inline bool intersects(const std::uint64_t* a, const std::uint64_t* b,
                       std::size_t words) {
    for (std::size_t w = 0; w < words; ++w) {
        if (a[w] & b[w]) return true;
    }
    return false;
}

template <typename F>
inline void for_each_bit(const std::uint64_t* row, std::size_t words, F&& f) {
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t x = row[w];
        while (x) {
            f((w << 6) + std::countr_zero(x));
            x &= x - 1;
        }
    }
}

}  // namespace bits

class CleanGraph {
public:
    CleanGraph(FactoredRing ring, std::uint64_t budget)
        : ring_(std::move(ring)),
          idem_(ring_),
          units_(ring_) {
        cpp_int nv = ring_.vertex_count();
        if (nv > budget) {
            throw BudgetError("graph with " + nv.str() +
                              " vertices exceeds vertex budget " +
                              std::to_string(budget));
        }
        N_ = static_cast<std::size_t>(nv);
        phi_ = units_.size();
        cells_ = idem_.size();
        words_ = bits::words_for(N_);
        bits_.assign(N_ * words_, 0);
        fill_adjacency();
    }

    const FactoredRing& ring() const { return ring_; }
    const IdempotentTable& idempotents() const { return idem_; }
    const UnitTable& units() const { return units_; }

    std::size_t num_vertices() const { return N_; }
    std::size_t phi() const { return phi_; }
    std::size_t num_cells() const { return cells_; }
    std::size_t words() const { return words_; }

    std::size_t vertex_id(const CleanVertex& v) const {
        if (v.idem_index >= cells_ || v.unit_index >= phi_) {
            throw std::invalid_argument("vertex indices out of range");
        }
        return v.idem_index * phi_ + v.unit_index;
    }
    CleanVertex vertex_of(std::size_t id) const {
        if (id >= N_) throw std::invalid_argument("vertex id out of range");
        return CleanVertex{id / phi_, id % phi_};
    }

    const std::uint64_t* row(std::size_t i) const {
        return bits_.data() + i * words_;
    }

    bool adjacent_ids(std::size_t i, std::size_t j) const {
        if (i >= N_ || j >= N_) {
            throw std::invalid_argument("vertex id out of range");
        }
        return bits::test_bit(row(i), j);
    }

    std::size_t degree(std::size_t i) const {
        return bits::popcount(row(i), words_);
    }

    cpp_int num_edges() const {
        cpp_int twice = 0;
        for (std::size_t i = 0; i < N_; ++i) twice += degree(i);
        return twice / 2;
    }

private:
    void fill_adjacency() {
        // same-cell edges: units that are mutual inverses (u != u^-1)
        for (std::size_t i = 0; i < cells_; ++i) {
            std::size_t base = i * phi_;
            for (std::size_t j = 0; j < phi_; ++j) {
                std::size_t l = units_.inverse_index(j);
                if (l != j) {
                    bits::set_bit(mutable_row(base + j), base + l);
                }
            }
        }
        // cross-cell edges
        for (std::size_t i = 0; i < cells_; ++i) {
            std::uint64_t mi = idem_.mask(i);
            for (std::size_t k = i + 1; k < cells_; ++k) {
                std::uint64_t mk = idem_.mask(k);
                std::size_t bi = i * phi_, bk = k * phi_;
                if ((mi & mk) == 0) {
                    // annihilating idempotents: complete bipartite block
                    for (std::size_t j = 0; j < phi_; ++j) {
                        bits::set_range(mutable_row(bi + j), bk, bk + phi_);
                        bits::set_range(mutable_row(bk + j), bi, bi + phi_);
                    }
                } else {
                    // only unit-inverse pairs connect these cells
                    for (std::size_t j = 0; j < phi_; ++j) {
                        std::size_t l = units_.inverse_index(j);
                        bits::set_bit(mutable_row(bi + j), bk + l);
                        bits::set_bit(mutable_row(bk + l), bi + j);
                    }
                }
            }
        }
    }

    std::uint64_t* mutable_row(std::size_t i) {
        return bits_.data() + i * words_;
    }

    FactoredRing ring_;
    IdempotentTable idem_;
    UnitTable units_;
    std::size_t N_ = 0, phi_ = 0, cells_ = 0, words_ = 0;
    std::vector<std::uint64_t> bits_;
};

inline CleanGraph build_clean_graph(const FactoredRing& ring,
                                    std::uint64_t budget =
                                        kDefaultVertexBudget) {
    return CleanGraph(ring, budget);
}

inline bool is_adjacent(const CleanGraph& g, const CleanVertex& a,
                        const CleanVertex& b) {
    std::size_t ia = g.vertex_id(a), ib = g.vertex_id(b);
    if (ia == ib) {
        throw std::domain_error("adjacency is undefined for a vertex with "
                                "itself");
    }
    return g.adjacent_ids(ia, ib);
}

// -------- BFS machinery --------

namespace detail {

// Scratch buffers reused across BFS runs on one graph.
struct BfsScratch {
    std::vector<std::uint64_t> frontier, next, visited, unvisited;

    void reset(std::size_t words) {
        frontier.assign(words, 0);
        next.assign(words, 0);
        visited.assign(words, 0);
        unvisited.assign(words, 0);
    }
};

// Expand one BFS level. frontier/visited/unvisited are bitsets; next is
// overwritten with the new level. Returns popcount of the new level.
inline std::size_t expand_level(const CleanGraph& g, BfsScratch& s,
                                std::size_t frontier_count,
                                std::size_t unvisited_count) {
    const std::size_t W = g.words();
    std::fill(s.next.begin(), s.next.end(), 0);
    // Heuristic: top-down costs |frontier| row-ORs; bottom-up costs one
    // early-exit intersection per unvisited vertex (~4 words typical).
    bool top_down = frontier_count * W <= unvisited_count * 8;
    if (top_down) {
        bits::for_each_bit(s.frontier.data(), W, [&](std::size_t v) {
            const std::uint64_t* r = g.row(v);
            for (std::size_t w = 0; w < W; ++w) s.next[w] |= r[w];
        });
        for (std::size_t w = 0; w < W; ++w) s.next[w] &= ~s.visited[w];
    } else {
        bits::for_each_bit(s.unvisited.data(), W, [&](std::size_t u) {
            if (bits::intersects(g.row(u), s.frontier.data(), W)) {
                bits::set_bit(s.next.data(), u);
            }
        });
    }
    std::size_t c = bits::popcount(s.next.data(), W);
    for (std::size_t w = 0; w < W; ++w) {
        s.visited[w] |= s.next[w];
        s.unvisited[w] &= ~s.next[w];
    }
    std::swap(s.frontier, s.next);
    return c;
}

inline void init_source(const CleanGraph& g, BfsScratch& s, std::size_t src) {
    const std::size_t W = g.words();
    const std::uint64_t* r = g.row(src);
    for (std::size_t w = 0; w < W; ++w) {
        s.frontier[w] = r[w];
        s.visited[w] = r[w];
    }
    bits::set_bit(s.visited.data(), src);
    // mask off bits beyond N
    std::size_t N = g.num_vertices();
    if (N & 63) {
        std::uint64_t tail = ~0ull >> (64 - (N & 63));
        s.visited[W - 1] &= tail;
        s.frontier[W - 1] &= tail;
    }
    for (std::size_t w = 0; w < W; ++w) s.unvisited[w] = ~s.visited[w];
    if (N & 63) s.unvisited[W - 1] &= ~0ull >> (64 - (N & 63));
}

}  // namespace detail

// Aggregate census of all-pairs distances: per-distance unordered pair
// counts, Wiener sum, diameter, connectivity. Pure BFS over the bit matrix.
struct GraphScan {
    bool connected = false;
    cpp_int wiener = 0;                    // meaningful when connected
    std::vector<cpp_int> pairs_at_distance;  // index = distance, [0] unused
    int diameter = 0;                      // max eccentricity when connected
};

inline GraphScan scan_graph(const CleanGraph& g) {
    const std::size_t N = g.num_vertices();
    const std::size_t W = g.words();
    GraphScan out;
    if (N == 0) {
        out.connected = true;
        return out;
    }
    detail::BfsScratch s;
    s.reset(W);
    std::vector<cpp_int> ordered_counts(1, 0);
    cpp_int ordered_sum = 0;
    bool all_reached = true;
    int max_ecc = 0;
    for (std::size_t src = 0; src < N; ++src) {
        detail::init_source(g, s, src);
        std::size_t level = 1;
        std::size_t level_count = bits::popcount(s.frontier.data(), W);
        std::size_t reached = 1 + level_count;
        int ecc = 0;
        while (level_count > 0) {
            if (ordered_counts.size() <= level) {
                ordered_counts.resize(level + 1, 0);
            }
            ordered_counts[level] += level_count;
            ordered_sum += cpp_int(level) * level_count;
            ecc = static_cast<int>(level);
            if (reached == N) break;
            level_count = detail::expand_level(
                g, s, level_count, N - reached);
            reached += level_count;
            ++level;
        }
        if (reached < N) all_reached = false;
        max_ecc = std::max(max_ecc, ecc);
    }
    out.connected = all_reached;
    if (ordered_sum % 2 != 0) {
        throw std::logic_error("ordered distance sum is odd; asymmetric "
                               "adjacency");
    }
    out.wiener = ordered_sum / 2;
    out.pairs_at_distance.assign(ordered_counts.size(), 0);
    for (std::size_t d = 1; d < ordered_counts.size(); ++d) {
        if (ordered_counts[d] % 2 != 0) {
            throw std::logic_error("odd ordered pair count at distance " +
                                   std::to_string(d));
        }
        out.pairs_at_distance[d] = ordered_counts[d] / 2;
    }
    out.diameter = max_ecc;
    return out;
}

inline bool is_connected(const CleanGraph& g) {
    const std::size_t N = g.num_vertices();
    if (N <= 1) return true;
    const std::size_t W = g.words();
    detail::BfsScratch s;
    s.reset(W);
    detail::init_source(g, s, 0);
    std::size_t level_count = bits::popcount(s.frontier.data(), W);
    std::size_t reached = 1 + level_count;
    while (level_count > 0 && reached < N) {
        level_count = detail::expand_level(g, s, level_count, N - reached);
        reached += level_count;
    }
    return reached == N;
}

// Max eccentricity over all sources; empty when disconnected.
inline std::optional<int> diameter(const CleanGraph& g) {
    GraphScan sc = scan_graph(g);
    if (!sc.connected) return std::nullopt;
    return sc.diameter;
}

// Exact shortest-path length by level BFS from a; empty when unreachable.
inline std::optional<int> bfs_distance_ids(const CleanGraph& g, std::size_t a,
                                           std::size_t b) {
    const std::size_t N = g.num_vertices();
    if (a >= N || b >= N) {
        throw std::invalid_argument("vertex id out of range");
    }
    if (a == b) return 0;
    if (bits::test_bit(g.row(a), b)) return 1;
    const std::size_t W = g.words();
    detail::BfsScratch s;
    s.reset(W);
    detail::init_source(g, s, a);
    std::size_t level_count = bits::popcount(s.frontier.data(), W);
    std::size_t reached = 1 + level_count;
    int t = 1;
    while (level_count > 0) {
        // b adjacent to the current frontier <=> d(a,b) == t+1
        if (bits::intersects(g.row(b), s.frontier.data(), W)) return t + 1;
        if (reached == N) break;
        level_count = detail::expand_level(g, s, level_count, N - reached);
        reached += level_count;
        ++t;
    }
    return std::nullopt;
}

inline std::optional<int> bfs_distance(const CleanGraph& g,
                                       const CleanVertex& a,
                                       const CleanVertex& b) {
    return bfs_distance_ids(g, g.vertex_id(a), g.vertex_id(b));
}

// -------- closed-form distance (case analysis on (e,u) pairs) --------
//
// For rings with at least two local factors the graph is connected and
//   d = 1  if e_i*e_k = 0 or u_j*u_l = 1,
//   d = 3  if e_i = e_k = 1 and u_j*u_l != 1,
//   d = 2  otherwise (same non-unity idempotent, or distinct non-annihilating
//          idempotents, with non-inverse units).

inline int closed_form_distance_parts(const FactoredRing& ring,
                                      std::uint64_t mask_a,
                                      const RingElement& unit_a,
                                      std::uint64_t mask_b,
                                      const RingElement& unit_b) {
    if (ring.n() < 2) {
        throw std::domain_error(
            "closed-form distance requires >= 2 local factors (the graph on "
            "a local ring is disconnected or trivial)");
    }
    std::uint64_t full = (std::uint64_t(1) << ring.n()) - 1;
    if (mask_a == mask_b && unit_a == unit_b) {
        throw std::domain_error("distance of a vertex to itself is not a "
                                "closed-form case; it is 0 by definition");
    }
    bool units_inverse = mul(ring, unit_a, unit_b) == one_element(ring);
    if ((mask_a & mask_b) == 0 || units_inverse) return 1;
    if (mask_a == full && mask_b == full) return 3;
    return 2;
}

inline int closed_form_distance(const CleanGraph& g, const CleanVertex& a,
                                const CleanVertex& b) {
    g.vertex_id(a);
    g.vertex_id(b);  // range checks
    return closed_form_distance_parts(
        g.ring(), g.idempotents().mask(a.idem_index),
        g.units().unit(a.unit_index), g.idempotents().mask(b.idem_index),
        g.units().unit(b.unit_index));
}

// -------- export --------

inline void export_graph(const CleanGraph& g, const std::string& format,
                         std::ostream& os) {
    const std::size_t N = g.num_vertices();
    if (format == "dot") {
        os << "graph cl2 {\n";
        for (std::size_t i = 0; i < N; ++i) {
            CleanVertex v = g.vertex_of(i);
            os << "  " << i << " [label=\"e" << v.idem_index << "_u"
               << v.unit_index << "\"];\n";
        }
        for (std::size_t i = 0; i < N; ++i) {
            const std::uint64_t* r = g.row(i);
            bits::for_each_bit(r, g.words(), [&](std::size_t j) {
                if (j > i) os << "  " << i << " -- " << j << ";\n";
            });
        }
        os << "}\n";
    } else if (format == "json") {
        nlohmann::ordered_json j;
        j["ring"] = g.ring().spec_string();
        j["num_vertices"] = N;
        std::vector<std::size_t> sizes(g.num_cells(), g.phi());
        j["partition_sizes"] = sizes;
        nlohmann::ordered_json edges = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < N; ++i) {
            bits::for_each_bit(g.row(i), g.words(), [&](std::size_t k) {
                if (k > i) edges.push_back({i, k});
            });
        }
        j["edges"] = std::move(edges);
        os << j.dump(2) << "\n";
    } else if (format == "csv-edges") {
        os << "i,j\n";
        for (std::size_t i = 0; i < N; ++i) {
            bits::for_each_bit(g.row(i), g.words(), [&](std::size_t k) {
                if (k > i) os << i << "," << k << "\n";
            });
        }
    } else {
        throw std::invalid_argument("unknown export format '" + format +
                                    "' (expected dot, json, or csv-edges)");
    }
}

}  // namespace cleangraph
