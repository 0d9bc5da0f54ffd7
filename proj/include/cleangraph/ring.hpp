#pragma once

// Finite commutative rings presented as ordered products of local factors
// Z_{p^alpha}, with canonical enumerations of their nonzero idempotents and
// units. Closed-form counts (phi, self-inverse units, idempotents) are pure
// arithmetic on the factor list; tables are materialized only on demand.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "factor.hpp"

namespace cleangraph {

using boost::multiprecision::cpp_int;

// Raised when a requested computation would exceed an explicit size budget.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Hard cap on materialized table sizes (idempotent count or unit count);
// protects against accidental exponential enumerations. Graph construction
// applies its own (smaller, configurable) vertex budget on top.
inline constexpr std::uint64_t kEnumerationCap = 1ull << 21;

struct LocalFactor {
    std::uint64_t p;      // prime base
    std::uint32_t alpha;  // exponent >= 1
    std::uint64_t pk;     // p^alpha
};

struct RingElement {
    std::vector<std::uint64_t> coords;  // coords[i] in [0, pk_i)

    bool operator==(const RingElement& o) const { return coords == o.coords; }
    bool operator!=(const RingElement& o) const { return coords != o.coords; }
};

class FactoredRing {
public:
    FactoredRing() = default;

    const std::vector<LocalFactor>& factors() const { return factors_; }
    std::size_t n() const { return factors_.size(); }
    const cpp_int& phi() const { return phi_; }

    bool has_crt_view() const { return has_crt_; }
    const cpp_int& modulus() const {
        if (!has_crt_) {
            throw std::domain_error(
                "ring has repeated primes; no single-modulus view");
        }
        return modulus_;
    }

    // Count of distinct odd primes among the factors.
    int odd_prime_count() const { return h_; }
    // 2-adic valuation of the modulus (sum of exponents over p=2 factors).
    int two_adic_valuation() const { return m_; }

    cpp_int idempotent_count_nonzero() const {
        return (cpp_int(1) << n()) - 1;
    }
    cpp_int vertex_count() const { return idempotent_count_nonzero() * phi_; }

    // r = |{u : u^2 = 1}|, as a product of per-factor solution counts:
    // odd p -> 2; 2^1 -> 1; 2^2 -> 2; 2^alpha (alpha>=3) -> 4.
    cpp_int self_inverse_count() const {
        cpp_int r = 1;
        for (const auto& f : factors_) {
            if (f.p != 2) {
                r *= 2;
            } else if (f.alpha == 2) {
                r *= 2;
            } else if (f.alpha >= 3) {
                r *= 4;
            }
        }
        return r;
    }

    // Canonical textual form: decimal when the ring is the ascending-prime
    // factorization of a single modulus, explicit p^a list otherwise.
    std::string spec_string() const {
        bool ascending = true;
        for (std::size_t i = 1; i < factors_.size(); ++i) {
            if (factors_[i - 1].p >= factors_[i].p) ascending = false;
        }
        if (has_crt_ && ascending) {
            return modulus_.str();
        }
        std::string out;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i) out += "*";
            out += std::to_string(factors_[i].p) + "^" +
                   std::to_string(factors_[i].alpha);
        }
        return out;
    }

    friend FactoredRing make_ring(
        const std::vector<std::pair<std::uint64_t, std::uint32_t>>& factors);

private:
    std::vector<LocalFactor> factors_;
    cpp_int phi_ = 0;
    cpp_int modulus_ = 0;
    bool has_crt_ = false;
    int h_ = 0;
    int m_ = 0;
};

inline FactoredRing make_ring(
    const std::vector<std::pair<std::uint64_t, std::uint32_t>>& factors) {
    if (factors.empty()) {
        throw std::invalid_argument("make_ring: factor list is empty");
    }
    if (factors.size() > 63) {
        throw std::invalid_argument(
            "make_ring: more than 63 local factors unsupported");
    }
    FactoredRing r;
    std::vector<std::uint64_t> primes;
    for (const auto& [p, a] : factors) {
        if (!is_prime_u64(p)) {
            throw std::invalid_argument("make_ring: base " + std::to_string(p) +
                                        " is not prime");
        }
        if (a < 1) {
            throw std::invalid_argument("make_ring: exponent must be >= 1");
        }
        std::uint64_t pk = 1;
        for (std::uint32_t i = 0; i < a; ++i) {
            if (pk > (std::uint64_t(1) << 62) / p) {
                throw std::invalid_argument(
                    "make_ring: local factor modulus exceeds 2^62");
            }
            pk *= p;
        }
        r.factors_.push_back({p, a, pk});
        primes.push_back(p);
    }
    std::sort(primes.begin(), primes.end());
    r.has_crt_ =
        std::adjacent_find(primes.begin(), primes.end()) == primes.end();
    r.phi_ = 1;
    r.modulus_ = 1;
    std::vector<std::uint64_t> odd_seen;
    for (const auto& f : r.factors_) {
        r.phi_ *= cpp_int(f.pk) - f.pk / f.p;
        r.modulus_ *= f.pk;
        if (f.p == 2) {
            r.m_ += static_cast<int>(f.alpha);
        } else if (std::find(odd_seen.begin(), odd_seen.end(), f.p) ==
                   odd_seen.end()) {
            odd_seen.push_back(f.p);
        }
    }
    r.h_ = static_cast<int>(odd_seen.size());
    if (!r.has_crt_) r.modulus_ = 0;
    return r;
}

inline FactoredRing ring_from_integer(std::uint64_t n) {
    return make_ring(factorize(n));
}

// Ring spec text: either a decimal integer ("15") or *-separated prime-power
// terms ("2^2*3^1", bare "3" meaning exponent 1); duplicates allowed.
inline FactoredRing parse_ring_spec(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) throw std::invalid_argument("empty ring spec");
    auto parse_u64 = [](const std::string& t) -> std::uint64_t {
        if (t.empty() ||
            !std::all_of(t.begin(), t.end(), [](unsigned char c) {
                return std::isdigit(c);
            })) {
            throw std::invalid_argument("ring spec: bad number '" + t + "'");
        }
        try {
            return std::stoull(t);
        } catch (const std::exception&) {
            throw std::invalid_argument("ring spec: number out of range '" +
                                        t + "'");
        }
    };
    if (s.find('*') == std::string::npos &&
        s.find('^') == std::string::npos) {
        std::uint64_t n = parse_u64(s);
        if (n < 2) {
            throw std::invalid_argument("ring spec: modulus must be >= 2");
        }
        return ring_from_integer(n);
    }
    std::vector<std::pair<std::uint64_t, std::uint32_t>> factors;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find('*', pos);
        std::string term =
            s.substr(pos, next == std::string::npos ? next : next - pos);
        std::size_t caret = term.find('^');
        std::uint64_t p;
        std::uint64_t a = 1;
        if (caret == std::string::npos) {
            p = parse_u64(term);
        } else {
            p = parse_u64(term.substr(0, caret));
            a = parse_u64(term.substr(caret + 1));
        }
        if (a < 1 || a > 62) {
            throw std::invalid_argument("ring spec: bad exponent in '" + term +
                                        "'");
        }
        factors.emplace_back(p, static_cast<std::uint32_t>(a));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return make_ring(factors);
}

// -------- element operations (coordinate-wise modular arithmetic) --------

inline RingElement zero_element(const FactoredRing& r) {
    return RingElement{std::vector<std::uint64_t>(r.n(), 0)};
}

inline RingElement one_element(const FactoredRing& r) {
    RingElement e{std::vector<std::uint64_t>(r.n(), 1)};
    for (std::size_t i = 0; i < r.n(); ++i) {
        e.coords[i] %= r.factors()[i].pk;  // Z_2 factor: 1 % 2 = 1; fine
    }
    return e;
}

inline void check_element(const FactoredRing& r, const RingElement& a) {
    if (a.coords.size() != r.n()) {
        throw std::invalid_argument("element does not belong to this ring");
    }
    for (std::size_t i = 0; i < r.n(); ++i) {
        if (a.coords[i] >= r.factors()[i].pk) {
            throw std::invalid_argument("element coordinate out of range");
        }
    }
}

inline RingElement mul(const FactoredRing& r, const RingElement& a,
                       const RingElement& b) {
    check_element(r, a);
    check_element(r, b);
    RingElement c{std::vector<std::uint64_t>(r.n())};
    for (std::size_t i = 0; i < r.n(); ++i) {
        c.coords[i] = mulmod(a.coords[i], b.coords[i], r.factors()[i].pk);
    }
    return c;
}

inline RingElement add(const FactoredRing& r, const RingElement& a,
                       const RingElement& b) {
    check_element(r, a);
    check_element(r, b);
    RingElement c{std::vector<std::uint64_t>(r.n())};
    for (std::size_t i = 0; i < r.n(); ++i) {
        std::uint64_t pk = r.factors()[i].pk;
        c.coords[i] = (a.coords[i] + b.coords[i]) % pk;
    }
    return c;
}

inline bool is_zero(const RingElement& a) {
    return std::all_of(a.coords.begin(), a.coords.end(),
                       [](std::uint64_t c) { return c == 0; });
}

inline bool is_idempotent(const FactoredRing& r, const RingElement& a) {
    check_element(r, a);
    for (std::size_t i = 0; i < r.n(); ++i) {
        std::uint64_t pk = r.factors()[i].pk;
        if (mulmod(a.coords[i], a.coords[i], pk) != a.coords[i]) return false;
    }
    return true;
}

inline bool is_unit(const FactoredRing& r, const RingElement& a) {
    check_element(r, a);
    for (std::size_t i = 0; i < r.n(); ++i) {
        if (a.coords[i] % r.factors()[i].p == 0) return false;
    }
    return true;
}

// 1 - e, coordinate-wise; for an idempotent e this is its complement and
// satisfies e * (1-e) = 0.
inline RingElement complement_idempotent(const FactoredRing& r,
                                         const RingElement& e) {
    check_element(r, e);
    RingElement c{std::vector<std::uint64_t>(r.n())};
    for (std::size_t i = 0; i < r.n(); ++i) {
        std::uint64_t pk = r.factors()[i].pk;
        c.coords[i] = (pk + 1 - e.coords[i]) % pk;
    }
    return c;
}

inline std::uint64_t inv_mod_u64(std::uint64_t a, std::uint64_t m) {
    // extended Euclid on signed 128-bit intermediates
    __int128 t = 0, new_t = 1;
    __int128 r = m, new_r = a % m;
    while (new_r != 0) {
        __int128 q = r / new_r;
        __int128 tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) {
        throw std::domain_error("inverse of a non-unit");
    }
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

inline RingElement inverse(const FactoredRing& r, const RingElement& a) {
    check_element(r, a);
    if (!is_unit(r, a)) {
        throw std::domain_error("inverse of a non-unit element");
    }
    RingElement c{std::vector<std::uint64_t>(r.n())};
    for (std::size_t i = 0; i < r.n(); ++i) {
        c.coords[i] = inv_mod_u64(a.coords[i], r.factors()[i].pk);
    }
    return c;
}

// Natural residue of an element under the single-modulus view.
inline cpp_int element_residue(const FactoredRing& r, const RingElement& a) {
    check_element(r, a);
    const cpp_int& M = r.modulus();  // throws without CRT view
    cpp_int x = 0;
    for (std::size_t i = 0; i < r.n(); ++i) {
        std::uint64_t pk = r.factors()[i].pk;
        cpp_int Mi = M / pk;
        std::uint64_t mi = static_cast<std::uint64_t>(Mi % pk);
        std::uint64_t ti = inv_mod_u64(mi, pk);
        x += cpp_int(a.coords[i]) * Mi % M * ti;
        x %= M;
    }
    return x;
}

inline RingElement element_from_residue(const FactoredRing& r,
                                        const cpp_int& v) {
    RingElement a{std::vector<std::uint64_t>(r.n())};
    for (std::size_t i = 0; i < r.n(); ++i) {
        cpp_int c = v % r.factors()[i].pk;
        if (c < 0) c += r.factors()[i].pk;
        a.coords[i] = static_cast<std::uint64_t>(c);
    }
    return a;
}

// Deterministic total order on elements: residue order under the CRT view
// when available, otherwise big-endian mixed-radix (lexicographic) order.
inline cpp_int element_order_key(const FactoredRing& r, const RingElement& a) {
    check_element(r, a);
    if (r.has_crt_view()) return element_residue(r, a);
    cpp_int key = 0;
    for (std::size_t i = 0; i < r.n(); ++i) {
        key = key * r.factors()[i].pk + a.coords[i];
    }
    return key;
}

// -------- idempotent table --------
//
// Nonzero idempotents correspond to nonempty support masks (bit i set means
// coordinate i equals 1). Canonical order: the full mask first, then the
// remaining masks grouped as complement pairs keyed by the member with bit 0
// set, pairs ascending by that representative, representative first. With
// 1-based positions this yields e_1 = 1, e_{2m} * e_{2m+1} = 0 and
// e_{2m+1} = 1 - e_{2m}. Positions are computable in O(1) from the mask, so
// no enumeration is needed for closed-form paths.

inline std::size_t idempotent_mask_to_index(std::uint64_t mask,
                                            std::size_t n) {
    std::uint64_t full = (n == 64) ? ~0ull : ((std::uint64_t(1) << n) - 1);
    if (mask == 0 || mask > full) {
        throw std::invalid_argument("idempotent mask out of range");
    }
    if (mask == full) return 0;
    std::uint64_t rep = (mask & 1) ? mask : (full ^ mask);
    std::uint64_t t = rep >> 1;
    return 1 + 2 * static_cast<std::size_t>(t) + ((mask & 1) ? 0 : 1);
}

inline std::uint64_t idempotent_index_to_mask(std::size_t idx, std::size_t n) {
    std::uint64_t full = (n == 64) ? ~0ull : ((std::uint64_t(1) << n) - 1);
    if (idx == 0) return full;
    std::uint64_t t = (idx - 1) / 2;
    std::uint64_t rep = 2 * t + 1;
    if (rep >= full) {
        throw std::invalid_argument("idempotent index out of range");
    }
    return ((idx - 1) % 2 == 0) ? rep : (full ^ rep);
}

class IdempotentTable {
public:
    explicit IdempotentTable(const FactoredRing& ring) {
        n_ = ring.n();
        cpp_int count = ring.idempotent_count_nonzero();
        if (count > kEnumerationCap) {
            throw BudgetError("idempotent table of size " + count.str() +
                              " exceeds enumeration cap " +
                              std::to_string(kEnumerationCap));
        }
        std::size_t sz = static_cast<std::size_t>(count);
        masks_.resize(sz);
        for (std::size_t i = 0; i < sz; ++i) {
            masks_[i] = idempotent_index_to_mask(i, n_);
        }
    }

    std::size_t size() const { return masks_.size(); }
    std::uint64_t mask(std::size_t idx) const { return masks_.at(idx); }
    std::size_t index_of_mask(std::uint64_t m) const {
        return idempotent_mask_to_index(m, n_);
    }

    RingElement element(const FactoredRing& ring, std::size_t idx) const {
        std::uint64_t m = masks_.at(idx);
        RingElement e{std::vector<std::uint64_t>(ring.n(), 0)};
        for (std::size_t i = 0; i < ring.n(); ++i) {
            if ((m >> i) & 1) e.coords[i] = 1 % ring.factors()[i].pk;
        }
        return e;
    }

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> masks_;
};

inline IdempotentTable enumerate_idempotents(const FactoredRing& ring) {
    return IdempotentTable(ring);
}

// Support mask of an idempotent element. Local factors Z_{p^a} have only the
// idempotents 0 and 1, so every coordinate must be one of those; bit i is set
// exactly when coordinate i equals 1.
inline std::uint64_t idempotent_support_mask(const FactoredRing& r,
                                             const RingElement& e) {
    check_element(r, e);
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < r.n(); ++i) {
        if (e.coords[i] == 1) {
            m |= std::uint64_t(1) << i;
        } else if (e.coords[i] != 0) {
            throw std::invalid_argument("element is not an idempotent");
        }
    }
    return m;
}

// -------- unit table --------
//
// Canonical order: self-inverse units first (ascending element order), then
// inverse pairs (u, u^-1) with the smaller member first, pairs ascending by
// their smaller member. The identity is always the first entry.

class UnitTable {
public:
    explicit UnitTable(const FactoredRing& ring) {
        if (ring.phi() > kEnumerationCap) {
            throw BudgetError("unit table of size " + ring.phi().str() +
                              " exceeds enumeration cap " +
                              std::to_string(kEnumerationCap));
        }
        build(ring);
    }

    std::size_t size() const { return units_.size(); }
    const RingElement& unit(std::size_t idx) const { return units_.at(idx); }
    std::size_t inverse_index(std::size_t idx) const {
        return inv_index_.at(idx);
    }
    std::size_t self_inverse_count() const { return self_inverse_count_; }
    std::size_t paired_count() const {
        return (units_.size() - self_inverse_count_) / 2;
    }

    bool is_self_inverse(std::size_t idx) const {
        return inv_index_[idx] == idx;
    }

    // Units u_p at positions self_inverse_count + 2q (q-th pair, smaller
    // member) and its inverse right after it.
    std::pair<std::size_t, std::size_t> pair_at(std::size_t q) const {
        std::size_t base = self_inverse_count_ + 2 * q;
        return {base, base + 1};
    }

    std::size_t index_of(const FactoredRing& ring, const RingElement& u) const {
        cpp_int key = element_order_key(ring, u);
        auto it = std::lower_bound(
            lookup_.begin(), lookup_.end(), key,
            [](const auto& kv, const cpp_int& k) { return kv.first < k; });
        if (it == lookup_.end() || it->first != key) {
            throw std::invalid_argument("element is not a unit of this ring");
        }
        return it->second;
    }

private:
    void build(const FactoredRing& ring) {
        std::vector<std::vector<std::uint64_t>> per_factor;
        for (const auto& f : ring.factors()) {
            std::vector<std::uint64_t> us;
            us.reserve(static_cast<std::size_t>(f.pk - f.pk / f.p));
            for (std::uint64_t x = 1; x < f.pk; ++x) {
                if (x % f.p != 0) us.push_back(x);
            }
            per_factor.push_back(std::move(us));
        }
        std::size_t total = static_cast<std::size_t>(ring.phi());
        std::vector<RingElement> raw;
        raw.reserve(total);
        std::vector<std::size_t> odo(ring.n(), 0);
        while (true) {
            RingElement e{std::vector<std::uint64_t>(ring.n())};
            for (std::size_t i = 0; i < ring.n(); ++i) {
                e.coords[i] = per_factor[i][odo[i]];
            }
            raw.push_back(std::move(e));
            std::size_t i = ring.n();
            while (i > 0) {
                --i;
                if (++odo[i] < per_factor[i].size()) break;
                odo[i] = 0;
                if (i == 0) goto done;
            }
        }
    done:
        if (raw.size() != total) {
            throw std::logic_error("unit enumeration miscount");
        }

        std::vector<cpp_int> keys(total);
        for (std::size_t i = 0; i < total; ++i) {
            keys[i] = element_order_key(ring, raw[i]);
        }
        std::vector<std::pair<cpp_int, std::size_t>> by_key(total);
        for (std::size_t i = 0; i < total; ++i) by_key[i] = {keys[i], i};
        std::sort(by_key.begin(), by_key.end());

        auto raw_index_of_key = [&](const cpp_int& k) {
            auto it = std::lower_bound(
                by_key.begin(), by_key.end(), k,
                [](const auto& kv, const cpp_int& kk) { return kv.first < kk; });
            return it->second;
        };

        std::vector<std::size_t> raw_inv(total);
        for (std::size_t i = 0; i < total; ++i) {
            RingElement v = inverse(ring, raw[i]);
            raw_inv[i] = raw_index_of_key(element_order_key(ring, v));
        }

        std::vector<std::size_t> selfs;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& [key, i] : by_key) {
            if (raw_inv[i] == i) {
                selfs.push_back(i);
            } else if (key < keys[raw_inv[i]]) {
                pairs.emplace_back(i, raw_inv[i]);
            }
        }
        self_inverse_count_ = selfs.size();

        units_.reserve(total);
        inv_index_.resize(total);
        for (std::size_t i : selfs) units_.push_back(raw[i]);
        for (const auto& [a, b] : pairs) {
            units_.push_back(raw[a]);
            units_.push_back(raw[b]);
        }
        for (std::size_t i = 0; i < self_inverse_count_; ++i) {
            inv_index_[i] = i;
        }
        for (std::size_t q = 0; q < pairs.size(); ++q) {
            std::size_t a = self_inverse_count_ + 2 * q;
            inv_index_[a] = a + 1;
            inv_index_[a + 1] = a;
        }

        lookup_.resize(total);
        for (std::size_t i = 0; i < total; ++i) {
            lookup_[i] = {element_order_key(ring, units_[i]), i};
        }
        std::sort(lookup_.begin(), lookup_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    std::vector<RingElement> units_;
    std::vector<std::size_t> inv_index_;
    std::vector<std::pair<cpp_int, std::size_t>> lookup_;
    std::size_t self_inverse_count_ = 0;
};

inline UnitTable enumerate_units(const FactoredRing& ring) {
    return UnitTable(ring);
}

// Count of x in [1,n) with x^2 = 1 (mod n), by the 2-adic case split:
// 2^h for m in {0,1}; 2^{h+1} for m = 2; 2^{h+2} for m >= 3, where
// m = v_2(n) and h = number of distinct odd primes dividing n.
inline cpp_int count_self_inverse_closed_form(std::uint64_t n) {
    if (n < 2) {
        throw std::invalid_argument(
            "count_self_inverse_closed_form: n must be >= 2");
    }
    int m = 0;
    std::uint64_t t = n;
    while (t % 2 == 0) {
        ++m;
        t /= 2;
    }
    int h = (t == 1) ? 0 : static_cast<int>(factorize(t).size());
    cpp_int r = cpp_int(1) << h;
    if (m == 2) r <<= 1;
    if (m >= 3) r <<= 2;
    return r;
}

}  // namespace cleangraph
