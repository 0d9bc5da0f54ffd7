#pragma once

// Wiener index of Cl2(R), three ways:
//  - wiener_census: exact closed form assembled from the distance case
//    analysis. Counts pairs at distance 1/2/3 directly from (n, phi, r),
//    using the full disjoint-support census of annihilating idempotent
//    pairs, (3^n - 2^{n+1} + 1)/2. Matches the BFS oracle on every
//    supported ring. This is the default ("proof") variant.
//  - legacy coefficient forms: a "complement census" family that counts
//    only the (2^n - 2)/2 complementary idempotent pairs as annihilating
//    (exact for n = 2, an overshoot of phi*(phi-1)*(3^n - 3*2^n + 3)/2 for
//    n >= 3) and an alternative case-2 coefficient set that disagrees with
//    the oracle even at n = 2 (it evaluates negative). Both are retained
//    behind the "statement" variant so verification runs can document the
//    discrepancies as errata instead of failing.
//  - wiener_oracle: exhaustive per-source BFS over the explicit graph.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "graph.hpp"
#include "ring.hpp"

namespace cleangraph {

// A closed-form evaluation produced a value that violates a structural
// guarantee (e.g. a sum that must be even is odd). Reported, never rounded.
class FormulaViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline cpp_int exact_half(const cpp_int& v, const char* what) {
    if (v % 2 != 0) {
        throw FormulaViolation(std::string("parity violation in ") + what +
                               ": value " + v.str() + " is odd");
    }
    return v / 2;
}

enum class WienerVariant { proof, statement };

inline const char* to_string(WienerVariant v) {
    return v == WienerVariant::proof ? "proof" : "statement";
}

// Case split on the unit group: 1 = only the identity unit; 2 = every unit
// is self-inverse, more than one; 3 = some unit differs from its inverse.
inline int wiener_case_label(const cpp_int& phi, const cpp_int& r) {
    if (phi == r) return (r == 1) ? 1 : 2;
    return 3;
}

// Unordered pair counts per distance, from the case analysis:
//   same cell, units mutually inverse            -> 1   (per cell: s/2)
//   annihilating idempotent cells, any units     -> 1   (Z * phi^2)
//   other distinct cells, units mutually inverse -> 1   (P * phi)
//   unity cell, units not inverse                -> 3
//   other same cell, units not inverse           -> 2
//   other distinct cells, units not inverse      -> 2
// where s = phi - r (non-self-inverse units), E = 2^n - 1 cells,
// Z = (3^n - 2^{n+1} + 1)/2 disjoint-support cell pairs, P = C(E,2) - Z.
struct WienerCensus {
    cpp_int d1 = 0, d2 = 0, d3 = 0;

    cpp_int total() const { return d1 + 2 * d2 + 3 * d3; }
};

inline WienerCensus wiener_census(std::size_t n_factors, const cpp_int& phi,
                                  const cpp_int& r) {
    if (n_factors < 2) {
        throw std::domain_error(
            "Wiener closed form requires >= 2 local factors (otherwise the "
            "graph is disconnected or a single vertex)");
    }
    cpp_int E = (cpp_int(1) << n_factors) - 1;
    cpp_int Z = exact_half(boost::multiprecision::pow(cpp_int(3),
                                                      unsigned(n_factors)) -
                               (cpp_int(1) << (n_factors + 1)) + 1,
                           "disjoint-support pair count");
    cpp_int P = exact_half(E * (E - 1), "cell pair count") - Z;
    cpp_int s_half = exact_half(phi - r, "non-self-inverse unit count");
    cpp_int same_cell_far = exact_half(phi * (phi - 1), "unit pair count") -
                            s_half;
    WienerCensus c;
    c.d1 = E * s_half + Z * phi * phi + P * phi;
    c.d2 = (E - 1) * same_cell_far + P * (phi * phi - phi);
    c.d3 = same_cell_far;
    return c;
}

// ---- legacy coefficient forms (documented errata; see README) ----

// Complement-only census, case 2 shape (phi = r): exact for n = 2 only.
inline cpp_int wiener_complement_census_case2(const cpp_int& r,
                                              std::size_t n) {
    cpp_int p2 = cpp_int(1) << n;          // 2^n
    cpp_int p4 = cpp_int(1) << (2 * n);    // 2^{2n}
    return exact_half(r * r * (2 * p4 - 5 * p2 + 5) -
                          r * (p4 - 2 * p2 + 3),
                      "complement-census case-2 form");
}

// Complement-only census, case 3 shape: exact for n = 2 only.
inline cpp_int wiener_complement_census_case3(const cpp_int& phi,
                                              const cpp_int& r,
                                              std::size_t n) {
    cpp_int p2 = cpp_int(1) << n;
    cpp_int p4 = cpp_int(1) << (2 * n);
    return exact_half(phi * phi * (2 * p4 - 5 * p2 + 5) -
                          phi * (p4 - p2 + 3) + r * p2,
                      "complement-census case-3 form");
}

// Alternative case-2 coefficient set; disagrees with the oracle for every
// supported instance (negative at n = 2). Kept solely for erratum reporting.
inline cpp_int wiener_statement_case2(const cpp_int& r, std::size_t n) {
    cpp_int p2 = cpp_int(1) << n;
    cpp_int p4 = cpp_int(1) << (2 * n);
    return exact_half(r * r * (2 * p4 - 17 * p2 + 21) -
                          r * (2 * p4 - 8 * p2 + 11),
                      "statement case-2 form");
}

// Closed-form Wiener index. The proof variant is the exact census; the
// statement variant substitutes the legacy coefficient forms in cases 2
// and 3 (case 1 has a single agreed form, (2^n-1)(2^n-2)/2).
inline cpp_int wiener_closed_form(const FactoredRing& ring,
                                  WienerVariant variant =
                                      WienerVariant::proof) {
    if (ring.n() < 2) {
        throw std::domain_error(
            "Wiener index is infinite for a ring with one local factor");
    }
    cpp_int phi = ring.phi();
    cpp_int r = ring.self_inverse_count();
    int c = wiener_case_label(phi, r);
    if (variant == WienerVariant::statement) {
        if (c == 2) return wiener_statement_case2(r, ring.n());
        if (c == 3) return wiener_complement_census_case3(phi, r, ring.n());
    }
    return wiener_census(ring.n(), phi, r).total();
}

// Wiener index of Cl2(Z_n): infinite (empty) when n is a prime power,
// otherwise the census formula with k = distinct prime count.
inline std::optional<cpp_int> wiener_zn(std::uint64_t n,
                                        WienerVariant variant =
                                            WienerVariant::proof) {
    if (n < 2) {
        throw std::invalid_argument("wiener_zn: n must be >= 2");
    }
    auto factors = factorize(n);
    if (factors.size() < 2) return std::nullopt;
    return wiener_closed_form(make_ring(factors), variant);
}

// Exhaustive BFS oracle; empty = infinite (disconnected).
inline std::optional<cpp_int> wiener_oracle(const CleanGraph& g) {
    GraphScan sc = scan_graph(g);
    if (!sc.connected) return std::nullopt;
    return sc.wiener;
}

struct WienerReport {
    std::string ring_spec;
    int case_label = 0;  // 0 when no case applies (single local factor)
    WienerVariant variant = WienerVariant::proof;
    std::optional<cpp_int> closed_form;  // empty = infinite
    std::optional<cpp_int> oracle;       // empty = infinite
    bool match = false;
    std::array<cpp_int, 4> pairs_at_distance{};  // indices 1..3
};

// Formula-vs-oracle reconciliation. The oracle half builds the graph, so
// the ring must be within the vertex budget.
inline WienerReport wiener_report(const FactoredRing& ring,
                                  WienerVariant variant = WienerVariant::proof,
                                  std::uint64_t budget = kDefaultVertexBudget) {
    WienerReport rep;
    rep.ring_spec = ring.spec_string();
    rep.variant = variant;
    if (ring.n() >= 2) {
        rep.case_label =
            wiener_case_label(ring.phi(), ring.self_inverse_count());
        rep.closed_form = wiener_closed_form(ring, variant);
    }
    CleanGraph g = build_clean_graph(ring, budget);
    GraphScan sc = scan_graph(g);
    if (sc.connected) {
        rep.oracle = sc.wiener;
        for (std::size_t d = 1; d < sc.pairs_at_distance.size(); ++d) {
            if (d <= 3) {
                rep.pairs_at_distance[d] = sc.pairs_at_distance[d];
            } else if (sc.pairs_at_distance[d] != 0) {
                throw std::logic_error(
                    "connected clean graph has a pair at distance > 3");
            }
        }
    }
    rep.match = (rep.closed_form == rep.oracle);  // empty==empty is a match
    return rep;
}

inline nlohmann::ordered_json wiener_report_to_json(const WienerReport& rep) {
    nlohmann::ordered_json j;
    j["ring"] = rep.ring_spec;
    j["case"] = rep.case_label;
    j["variant"] = to_string(rep.variant);
    j["closed_form"] =
        rep.closed_form ? rep.closed_form->str() : std::string("inf");
    j["oracle"] = rep.oracle ? rep.oracle->str() : std::string("inf");
    j["match"] = rep.match;
    nlohmann::ordered_json hist;
    for (int d = 1; d <= 3; ++d) {
        hist[std::to_string(d)] = rep.pairs_at_distance[d].str();
    }
    j["pairs_at_distance"] = std::move(hist);
    return j;
}

}  // namespace cleangraph
