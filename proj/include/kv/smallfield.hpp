#ifndef KV_SMALLFIELD_HPP
#define KV_SMALLFIELD_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "kv/errors.hpp"

namespace kv {

inline bool is_prime_u32(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/* The prime field F_p for small odd p.  Elements are residues in [0, p). */
class PrimeField {
public:
    using Elt = uint32_t;

    explicit PrimeField(uint32_t p) : p_(p) {
        if (p == 2 || !is_prime_u32(p))
            throw unsupported_characteristic("characteristic must be an odd prime, got " + std::to_string(p));
    }

    uint32_t p() const { return p_; }

    Elt zero() const { return 0; }
    Elt one() const { return 1; }
    Elt from_int(int64_t n) const {
        int64_t r = n % static_cast<int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<Elt>(r);
    }

    bool is_zero(Elt a) const { return a == 0; }
    bool eq(Elt a, Elt b) const { return a == b; }

    Elt add(Elt a, Elt b) const { uint64_t s = uint64_t(a) + b; return s >= p_ ? Elt(s - p_) : Elt(s); }
    Elt sub(Elt a, Elt b) const { return a >= b ? a - b : a + p_ - b; }
    Elt neg(Elt a) const { return a == 0 ? 0 : p_ - a; }
    Elt mul(Elt a, Elt b) const { return Elt((uint64_t(a) * b) % p_); }

    Elt inv(Elt a) const {
        if (a == 0) throw division_by_zero("inverse of 0 in F_p");
        // extended Euclid
        int64_t t = 0, newt = 1, r = p_, newr = a;
        while (newr != 0) {
            int64_t q = r / newr;
            int64_t tmp = t - q * newt; t = newt; newt = tmp;
            tmp = r - q * newr; r = newr; newr = tmp;
        }
        if (t < 0) t += p_;
        return Elt(t);
    }
    Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }

    Elt pow(Elt a, uint64_t e) const {
        Elt r = 1, base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    // p is small; direct search is exact and branch-free to reason about.
    std::optional<Elt> sqrt(Elt a) const {
        for (Elt x = 0; x <= p_ / 2; ++x)
            if (mul(x, x) == a) return x;
        return std::nullopt;
    }

    Elt random(std::mt19937_64& rng) const {
        return Elt(rng() % p_);
    }

    int size_of(Elt) const { return 1; }


    std::string to_string(Elt a) const { return std::to_string(a); }

private:
    uint32_t p_;
};

/*
 * The smallest field of characteristic p containing a square root of -1:
 * F_p itself when p = 1 (mod 4), the quadratic extension F_p(i) otherwise.
 * Elements are re + im*i.  When i already lies in the prime field, im stays
 * identically zero and element_i() returns a prime-field root.
 */
class BaseField {
public:
    struct Elt {
        uint32_t re = 0, im = 0;
        bool operator==(const Elt&) const = default;
    };

    explicit BaseField(uint32_t p) : fp_(p), i_in_prime_(p % 4 == 1), i0_(0) {
        if (i_in_prime_) {
            for (uint32_t x = 2; x < p; ++x)
                if (fp_.mul(x, x) == fp_.sub(0, 1)) { i0_ = x; break; }
        }
    }

    const PrimeField& prime() const { return fp_; }
    uint32_t p() const { return fp_.p(); }
    bool i_in_prime() const { return i_in_prime_; }

    Elt zero() const { return {0, 0}; }
    Elt one() const { return {1, 0}; }
    Elt from_int(int64_t n) const { return {fp_.from_int(n), 0}; }
    Elt element_i() const { return i_in_prime_ ? Elt{i0_, 0} : Elt{0, 1}; }

    bool is_zero(Elt a) const { return a.re == 0 && a.im == 0; }
    bool eq(Elt a, Elt b) const { return a == b; }

    Elt add(Elt a, Elt b) const { return {fp_.add(a.re, b.re), fp_.add(a.im, b.im)}; }
    Elt sub(Elt a, Elt b) const { return {fp_.sub(a.re, b.re), fp_.sub(a.im, b.im)}; }
    Elt neg(Elt a) const { return {fp_.neg(a.re), fp_.neg(a.im)}; }

    Elt mul(Elt a, Elt b) const {
        return {fp_.sub(fp_.mul(a.re, b.re), fp_.mul(a.im, b.im)),
                fp_.add(fp_.mul(a.re, b.im), fp_.mul(a.im, b.re))};
    }

    Elt inv(Elt a) const {
        if (is_zero(a)) throw division_by_zero("inverse of 0 in base field");
        uint32_t n = fp_.add(fp_.mul(a.re, a.re), fp_.mul(a.im, a.im));
        // re^2 + im^2 = 0 with (re,im) != 0 would require -1 square while im != 0
        if (n == 0) throw internal_inconsistency("zero norm in base field");
        uint32_t ninv = fp_.inv(n);
        return {fp_.mul(a.re, ninv), fp_.mul(fp_.neg(a.im), ninv)};
    }
    Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }

    Elt pow(Elt a, uint64_t e) const {
        Elt r = one(), base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    // Frobenius x -> x^p; on F_p(i) with p = 3 (mod 4) this is conjugation.
    Elt frobenius(Elt a) const {
        if (i_in_prime_) return a;
        return {a.re, fp_.neg(a.im)};
    }

    std::optional<Elt> sqrt(Elt a) const {
        if (is_zero(a)) return zero();
        // brute force over at most p^2 candidates; fields here are tiny
        for (uint32_t re = 0; re < p(); ++re)
            for (uint32_t im = 0; im < (i_in_prime_ ? 1u : p()); ++im) {
                Elt x{re, im};
                if (eq(mul(x, x), a)) return x;
            }
        return std::nullopt;
    }

    Elt random(std::mt19937_64& rng) const {
        if (i_in_prime_) return {fp_.random(rng), 0};
        return {fp_.random(rng), fp_.random(rng)};
    }

    int size_of(const Elt&) const { return 1; }


    std::string to_string(Elt a) const {
        if (a.im == 0) return std::to_string(a.re);
        std::string s = std::to_string(a.re) + "+" + std::to_string(a.im) + "i";
        return s;
    }

private:
    PrimeField fp_;
    bool i_in_prime_;
    uint32_t i0_;
};

/* Field descriptor of Section "make_base_field": the base field plus its chosen i. */
inline BaseField make_base_field(uint32_t p) { return BaseField(p); }

} // namespace kv

#endif
