#ifndef KV_GF_HPP
#define KV_GF_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kv/smallfield.hpp"

namespace kv {

/*
 * F_{p^m} as F_p[t]/(f) for a deterministically chosen monic irreducible f.
 * Elements are coefficient vectors of length m (constant term first).
 * Small fixed capacity keeps elements cheap to copy; the exhaustive searches
 * in the verifier iterate over hundreds of thousands of them.
 */
class Gf {
public:
    static constexpr int MAXM = 12;

    struct Elt {
        std::array<uint16_t, MAXM> c{};
        bool operator==(const Elt&) const = default;
    };

    Gf(uint32_t p, int m) : fp_(p), m_(m) {
        if (m < 1 || m > MAXM) throw usage_error("extension degree out of range");
        q_ = 1;
        for (int i = 0; i < m; ++i) q_ *= p;
        modulus_ = find_irreducible(p, m);
    }

    uint32_t p() const { return fp_.p(); }
    int degree() const { return m_; }
    uint64_t order() const { return q_; }
    const std::vector<uint32_t>& modulus() const { return modulus_; }

    Elt zero() const { return {}; }
    Elt one() const { Elt e; e.c[0] = 1; return e; }
    Elt gen() const {
        Elt e;
        if (m_ == 1) e.c[0] = fp_.from_int(2); // no proper generator coordinate; pick 2
        else e.c[1] = 1;
        return e;
    }
    Elt from_int(int64_t n) const { Elt e; e.c[0] = uint16_t(fp_.from_int(n)); return e; }

    bool is_zero(const Elt& a) const {
        for (int i = 0; i < m_; ++i) if (a.c[i]) return false;
        return true;
    }
    bool eq(const Elt& a, const Elt& b) const { return a == b; }

    Elt add(const Elt& a, const Elt& b) const {
        Elt r;
        for (int i = 0; i < m_; ++i) r.c[i] = uint16_t(fp_.add(a.c[i], b.c[i]));
        return r;
    }
    Elt sub(const Elt& a, const Elt& b) const {
        Elt r;
        for (int i = 0; i < m_; ++i) r.c[i] = uint16_t(fp_.sub(a.c[i], b.c[i]));
        return r;
    }
    Elt neg(const Elt& a) const {
        Elt r;
        for (int i = 0; i < m_; ++i) r.c[i] = uint16_t(fp_.neg(a.c[i]));
        return r;
    }

    Elt mul(const Elt& a, const Elt& b) const {
        uint32_t acc[2 * MAXM - 1] = {};
        for (int i = 0; i < m_; ++i) {
            if (!a.c[i]) continue;
            for (int j = 0; j < m_; ++j)
                acc[i + j] = (acc[i + j] + uint32_t(a.c[i]) * b.c[j]) % fp_.p();
        }
        // reduce by monic modulus: t^m = -(f_{m-1} t^{m-1} + ... + f_0)
        for (int d = 2 * m_ - 2; d >= m_; --d) {
            uint32_t lead = acc[d];
            if (!lead) continue;
            acc[d] = 0;
            for (int j = 0; j < m_; ++j)
                acc[d - m_ + j] = (acc[d - m_ + j] + (uint64_t(lead) * (fp_.p() - modulus_[j]))) % fp_.p();
        }
        Elt r;
        for (int i = 0; i < m_; ++i) r.c[i] = uint16_t(acc[i]);
        return r;
    }

    Elt pow(Elt a, uint64_t e) const {
        Elt r = one();
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    Elt inv(const Elt& a) const {
        if (is_zero(a)) throw division_by_zero("inverse of 0 in F_q");
        return pow(a, q_ - 2);
    }
    Elt div(const Elt& a, const Elt& b) const { return mul(a, inv(b)); }

    Elt frobenius(const Elt& a) const { return pow(a, fp_.p()); }

    bool is_square(const Elt& a) const {
        if (is_zero(a)) return true;
        return eq(pow(a, (q_ - 1) / 2), one());
    }

    bool has_i() const { return q_ % 4 == 1; }

    // The canonical square root of -1: among the two roots, the one with the
    // lexicographically smaller coefficient tuple.
    Elt element_i() const {
        if (!has_i()) throw domain_error("no sqrt(-1) in this field; use an even extension degree");
        auto r = sqrt(neg(one()));
        return *r;
    }

    // Tonelli-Shanks; returns the canonical root (lexicographically smaller tuple).
    std::optional<Elt> sqrt(const Elt& a) const {
        if (is_zero(a)) return zero();
        if (!is_square(a)) return std::nullopt;
        uint64_t s = q_ - 1;
        int e = 0;
        while ((s & 1) == 0) { s >>= 1; ++e; }
        // find a non-square deterministically
        Elt n = gen();
        while (is_square(n)) n = add(n, one());
        Elt x = pow(a, (s + 1) / 2);
        Elt b = pow(a, s);
        Elt g = pow(n, s);
        int r = e;
        while (true) {
            Elt t = b;
            int mdeg = 0;
            while (!eq(t, one())) { t = mul(t, t); ++mdeg; }
            if (mdeg == 0) break;
            Elt gs = g;
            for (int i = 0; i < r - mdeg - 1; ++i) gs = mul(gs, gs);
            x = mul(x, gs);
            g = mul(gs, gs);
            b = mul(b, g);
            r = mdeg;
        }
        Elt other = neg(x);
        return lex_less(other, x) ? other : x;
    }

    Elt random(std::mt19937_64& rng) const {
        Elt r;
        for (int i = 0; i < m_; ++i) r.c[i] = uint16_t(rng() % fp_.p());
        return r;
    }

    int size_of(const Elt&) const { return 1; }

    std::string to_string(const Elt& a) const {
        std::string s = "[";
        for (int i = 0; i < m_; ++i) {
            if (i) s += ",";
            s += std::to_string(a.c[i]);
        }
        return s + "]";
    }

    bool lex_less(const Elt& a, const Elt& b) const {
        for (int i = m_ - 1; i >= 0; --i) {
            if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
        }
        return false;
    }

private:
    PrimeField fp_;
    int m_;
    uint64_t q_;
    std::vector<uint32_t> modulus_; // f_0..f_{m-1} of the monic modulus

    // Univariate helpers over F_p on plain coefficient vectors (trimmed, constant first).
    static std::vector<uint32_t> poly_trim(std::vector<uint32_t> v) {
        while (!v.empty() && v.back() == 0) v.pop_back();
        return v;
    }

    static std::vector<uint32_t> poly_mulmod(const PrimeField& fp, const std::vector<uint32_t>& a,
                                             const std::vector<uint32_t>& b, const std::vector<uint32_t>& f) {
        std::vector<uint32_t> prod(a.size() + b.size(), 0);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j)
                prod[i + j] = fp.add(prod[i + j], fp.mul(a[i], b[j]));
        prod = poly_trim(std::move(prod));
        // reduce mod monic f of degree m
        size_t m = f.size() - 1;
        while (prod.size() > m) {
            uint32_t lead = prod.back();
            size_t sh = prod.size() - 1 - m;
            if (lead) {
                for (size_t j = 0; j <= m; ++j)
                    prod[sh + j] = fp.sub(prod[sh + j], fp.mul(lead, f[j]));
            }
            prod = poly_trim(std::move(prod));
            if (prod.empty()) break;
        }
        return prod;
    }

    static std::vector<uint32_t> poly_gcd(const PrimeField& fp, std::vector<uint32_t> a, std::vector<uint32_t> b) {
        a = poly_trim(std::move(a));
        b = poly_trim(std::move(b));
        while (!b.empty()) {
            // a mod b
            while (a.size() >= b.size() && !a.empty()) {
                uint32_t f = fp.div(a.back(), b.back());
                size_t sh = a.size() - b.size();
                for (size_t j = 0; j < b.size(); ++j)
                    a[sh + j] = fp.sub(a[sh + j], fp.mul(f, b[j]));
                a = poly_trim(std::move(a));
            }
            std::swap(a, b);
        }
        return a;
    }

    // Smallest (lexicographic in f_0..f_{m-1}) monic irreducible of degree m.
    static std::vector<uint32_t> find_irreducible(uint32_t p, int m) {
        PrimeField fp(p);
        std::vector<uint32_t> f(m + 1, 0);
        f[m] = 1;
        while (true) {
            if (irreducible(fp, f, m)) return f;
            // increment the coefficient vector f_0..f_{m-1} like a base-p counter
            int i = 0;
            while (i < m) {
                if (++f[i] < p) break;
                f[i] = 0;
                ++i;
            }
            if (i == m) throw internal_inconsistency("no irreducible polynomial found");
        }
    }

    static bool irreducible(const PrimeField& fp, const std::vector<uint32_t>& f, int m) {
        if (m == 1) return true;
        // x^(p^i) mod f by repeated p-th powering of t
        std::vector<uint32_t> t = {0, 1};
        std::vector<uint32_t> xp = t;
        for (int i = 1; i <= m; ++i) {
            // xp = xp^p mod f
            std::vector<uint32_t> acc = {1};
            std::vector<uint32_t> base = xp;
            uint32_t e = fp.p();
            while (e) {
                if (e & 1) acc = poly_mulmod(fp, acc, base, f);
                base = poly_mulmod(fp, base, base, f);
                e >>= 1;
            }
            xp = acc;
            // gcd(x^(p^i) - x, f) must be 1 for i < m
            std::vector<uint32_t> diff = xp;
            if (diff.size() < 2) diff.resize(2, 0);
            diff[1] = fp.sub(diff[1], 1);
            diff = poly_trim(std::move(diff));
            auto g = poly_gcd(fp, diff, f);
            if (i < m) {
                if (m % i == 0 && !(g.size() == 1)) return false;
            } else {
                // x^(p^m) = x (mod f) required
                if (!diff.empty()) return false;
            }
        }
        return true;
    }
};

} // namespace kv

#endif
