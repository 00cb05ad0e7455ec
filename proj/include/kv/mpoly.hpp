#ifndef KV_MPOLY_HPP
#define KV_MPOLY_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kv/errors.hpp"

namespace kv {

/*
 * Sparse multivariate polynomials over a pluggable coefficient field K.
 *
 * K is a field object exposing: Elt, zero(), one(), is_zero(), eq(), add(),
 * sub(), neg(), mul(), inv(), div(), from_int().  Elements are kept as a term
 * vector sorted graded-lexicographically descending, with no zero
 * coefficients; this is the canonical form every serialization relies on.
 *
 * Arity is bounded by 4 (theta coordinates); unused exponent slots are zero,
 * so monomial comparison can ignore arity.
 */

constexpr int MPOLY_MAX_VARS = 4;

struct Monomial {
    std::array<uint16_t, MPOLY_MAX_VARS> e{};

    int total() const { return int(e[0]) + e[1] + e[2] + e[3]; }

    bool operator==(const Monomial&) const = default;

    bool divides(const Monomial& other) const {
        for (int i = 0; i < MPOLY_MAX_VARS; ++i)
            if (e[i] > other.e[i]) return false;
        return true;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        for (int i = 0; i < MPOLY_MAX_VARS; ++i) r.e[i] = uint16_t(e[i] + o.e[i]);
        return r;
    }
    Monomial operator/(const Monomial& o) const {
        Monomial r;
        for (int i = 0; i < MPOLY_MAX_VARS; ++i) r.e[i] = uint16_t(e[i] - o.e[i]);
        return r;
    }
};

// graded-lex: higher total degree first, ties broken by earlier variables
inline bool mono_greater(const Monomial& a, const Monomial& b) {
    int ta = a.total(), tb = b.total();
    if (ta != tb) return ta > tb;
    for (int i = 0; i < MPOLY_MAX_VARS; ++i)
        if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
    return false;
}

struct MonoGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return mono_greater(a, b); }
};

template <class K>
struct MPoly {
    using Elt = typename K::Elt;
    struct Term {
        Monomial m;
        Elt c;
        bool operator==(const Term&) const = default;
    };

    int arity = 0;
    std::vector<Term> terms;

    static MPoly zero(int arity) { return MPoly{arity, {}}; }

    static MPoly constant(const K& F, int arity, Elt c) {
        MPoly r{arity, {}};
        if (!F.is_zero(c)) r.terms.push_back({Monomial{}, c});
        return r;
    }

    static MPoly variable(const K& F, int arity, int v) {
        Monomial m;
        m.e[v] = 1;
        return MPoly{arity, {{m, F.one()}}};
    }

    static MPoly term(const K& F, int arity, std::array<uint16_t, MPOLY_MAX_VARS> exps, Elt c) {
        MPoly r{arity, {}};
        if (!F.is_zero(c)) r.terms.push_back({Monomial{exps}, c});
        return r;
    }

    bool is_zero() const { return terms.empty(); }
    int num_terms() const { return int(terms.size()); }
    int degree() const { return terms.empty() ? -1 : terms.front().m.total(); } // graded order: lead has max degree

    int degree_in(int v) const {
        int d = -1;
        for (auto& t : terms) d = std::max(d, int(t.m.e[v]));
        return terms.empty() ? -1 : d;
    }

    bool depends_on(int v) const {
        for (auto& t : terms)
            if (t.m.e[v]) return true;
        return false;
    }

    const Term& lead() const { return terms.front(); }

    bool operator==(const MPoly& o) const { return arity == o.arity && terms == o.terms; }
};

namespace detail {
template <class K>
void require_same_shape(const MPoly<K>& f, const MPoly<K>& g) {
    if (f.arity != g.arity) throw shape_error("polynomial arity mismatch");
}
} // namespace detail

template <class K>
MPoly<K> poly_normalize(const K& F, int arity, std::vector<typename MPoly<K>::Term> ts) {
    std::sort(ts.begin(), ts.end(),
              [](const auto& a, const auto& b) { return mono_greater(a.m, b.m); });
    std::vector<typename MPoly<K>::Term> out;
    out.reserve(ts.size());
    for (auto& t : ts) {
        if (!out.empty() && out.back().m == t.m)
            out.back().c = F.add(out.back().c, t.c);
        else
            out.push_back(t);
        if (!out.empty() && F.is_zero(out.back().c)) out.pop_back();
    }
    return MPoly<K>{arity, std::move(out)};
}

template <class K>
MPoly<K> poly_add(const K& F, const MPoly<K>& f, const MPoly<K>& g) {
    detail::require_same_shape(f, g);
    std::vector<typename MPoly<K>::Term> out;
    out.reserve(f.terms.size() + g.terms.size());
    size_t i = 0, j = 0;
    while (i < f.terms.size() && j < g.terms.size()) {
        if (f.terms[i].m == g.terms[j].m) {
            auto c = F.add(f.terms[i].c, g.terms[j].c);
            if (!F.is_zero(c)) out.push_back({f.terms[i].m, c});
            ++i, ++j;
        } else if (mono_greater(f.terms[i].m, g.terms[j].m)) {
            out.push_back(f.terms[i++]);
        } else {
            out.push_back(g.terms[j++]);
        }
    }
    while (i < f.terms.size()) out.push_back(f.terms[i++]);
    while (j < g.terms.size()) out.push_back(g.terms[j++]);
    return MPoly<K>{f.arity, std::move(out)};
}

template <class K>
MPoly<K> poly_neg(const K& F, const MPoly<K>& f) {
    MPoly<K> r = f;
    for (auto& t : r.terms) t.c = F.neg(t.c);
    return r;
}

template <class K>
MPoly<K> poly_sub(const K& F, const MPoly<K>& f, const MPoly<K>& g) {
    return poly_add(F, f, poly_neg(F, g));
}

template <class K>
MPoly<K> poly_scale(const K& F, const MPoly<K>& f, typename K::Elt c) {
    if (F.is_zero(c)) return MPoly<K>::zero(f.arity);
    MPoly<K> r = f;
    for (auto& t : r.terms) t.c = F.mul(t.c, c);
    return r;
}

template <class K>
MPoly<K> poly_mul_term(const K& F, const MPoly<K>& f, const Monomial& m, typename K::Elt c) {
    if (F.is_zero(c)) return MPoly<K>::zero(f.arity);
    MPoly<K> r = f;
    for (auto& t : r.terms) {
        t.m = t.m * m;
        t.c = F.mul(t.c, c);
    }
    return r;
}

template <class K>
MPoly<K> poly_mul(const K& F, const MPoly<K>& f, const MPoly<K>& g) {
    detail::require_same_shape(f, g);
    if (f.is_zero() || g.is_zero()) return MPoly<K>::zero(f.arity);
    std::map<Monomial, typename K::Elt, MonoGreater> acc;
    const MPoly<K>& a = f.terms.size() <= g.terms.size() ? f : g;
    const MPoly<K>& b = f.terms.size() <= g.terms.size() ? g : f;
    for (auto& ta : a.terms)
        for (auto& tb : b.terms) {
            Monomial m = ta.m * tb.m;
            auto c = F.mul(ta.c, tb.c);
            auto it = acc.find(m);
            if (it == acc.end())
                acc.emplace(m, c);
            else
                it->second = F.add(it->second, c);
        }
    MPoly<K> r{f.arity, {}};
    r.terms.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (!F.is_zero(c)) r.terms.push_back({m, c});
    return r;
}

template <class K>
MPoly<K> poly_pow(const K& F, const MPoly<K>& f, uint32_t n) {
    MPoly<K> r = MPoly<K>::constant(F, f.arity, F.one());
    MPoly<K> base = f;
    while (n) {
        if (n & 1) r = poly_mul(F, r, base);
        if (n >>= 1) base = poly_mul(F, base, base);
    }
    return r;
}

/* Exact division: q with f = q*g, or nullopt when g does not divide f. */
template <class K>
std::optional<MPoly<K>> poly_exact_div(const K& F, const MPoly<K>& f, const MPoly<K>& g) {
    detail::require_same_shape(f, g);
    if (g.is_zero()) throw division_by_zero("polynomial division by zero");
    MPoly<K> rem = f;
    std::vector<typename MPoly<K>::Term> q;
    auto glead_inv = F.inv(g.lead().c);
    while (!rem.is_zero()) {
        const auto& lt = rem.lead();
        if (!g.lead().m.divides(lt.m)) return std::nullopt;
        Monomial qm = lt.m / g.lead().m;
        auto qc = F.mul(lt.c, glead_inv);
        q.push_back({qm, qc});
        rem = poly_sub(F, rem, poly_mul_term(F, g, qm, qc));
    }
    return poly_normalize<K>(F, f.arity, std::move(q));
}

template <class K>
MPoly<K> poly_derivative(const K& F, const MPoly<K>& f, int v) {
    std::vector<typename MPoly<K>::Term> out;
    for (auto& t : f.terms) {
        if (!t.m.e[v]) continue;
        auto c = F.mul(t.c, F.from_int(t.m.e[v]));
        if (F.is_zero(c)) continue;
        auto m = t.m;
        m.e[v]--;
        out.push_back({m, c});
    }
    return poly_normalize<K>(F, f.arity, std::move(out));
}

/* Total degree if every term shares it; nullopt otherwise (also for 0). */
template <class K>
std::optional<int> poly_is_homogeneous(const MPoly<K>& f) {
    if (f.is_zero()) return std::nullopt;
    int d = f.terms.front().m.total();
    for (auto& t : f.terms)
        if (t.m.total() != d) return std::nullopt;
    return d;
}

template <class K>
typename K::Elt poly_eval(const K& F, const MPoly<K>& f, const std::vector<typename K::Elt>& pt) {
    if (int(pt.size()) != f.arity) throw shape_error("evaluation point arity mismatch");
    // cache powers per variable up to the max exponent used
    std::array<std::vector<typename K::Elt>, MPOLY_MAX_VARS> pows;
    for (int v = 0; v < f.arity; ++v) {
        int maxe = 0;
        for (auto& t : f.terms) maxe = std::max(maxe, int(t.m.e[v]));
        pows[v].resize(maxe + 1);
        pows[v][0] = F.one();
        for (int e = 1; e <= maxe; ++e) pows[v][e] = F.mul(pows[v][e - 1], pt[v]);
    }
    auto acc = F.zero();
    for (auto& t : f.terms) {
        auto val = t.c;
        for (int v = 0; v < f.arity; ++v)
            if (t.m.e[v]) val = F.mul(val, pows[v][t.m.e[v]]);
        acc = F.add(acc, val);
    }
    return acc;
}

/* The homogeneous ring map sending variable j to images[j], expanded and collected. */
template <class K>
MPoly<K> poly_substitute(const K& F, const MPoly<K>& f, const std::vector<MPoly<K>>& images) {
    if (int(images.size()) != f.arity) throw shape_error("substitution image count mismatch");
    int out_arity = images.empty() ? f.arity : images[0].arity;
    for (auto& im : images)
        if (im.arity != out_arity) throw shape_error("substitution images disagree on arity");
    std::array<std::vector<MPoly<K>>, MPOLY_MAX_VARS> pows;
    for (int v = 0; v < f.arity; ++v) {
        int maxe = 0;
        for (auto& t : f.terms) maxe = std::max(maxe, int(t.m.e[v]));
        pows[v].resize(maxe + 1, MPoly<K>::zero(out_arity));
        pows[v][0] = MPoly<K>::constant(F, out_arity, F.one());
        for (int e = 1; e <= maxe; ++e) pows[v][e] = poly_mul(F, pows[v][e - 1], images[v]);
    }
    MPoly<K> acc = MPoly<K>::zero(out_arity);
    for (auto& t : f.terms) {
        MPoly<K> val = MPoly<K>::constant(F, out_arity, t.c);
        for (int v = 0; v < f.arity; ++v)
            if (t.m.e[v]) val = poly_mul(F, val, pows[v][t.m.e[v]]);
        acc = poly_add(F, acc, val);
    }
    return acc;
}

/* Scale so the graded-lex leading coefficient is 1. */
template <class K>
MPoly<K> poly_monic(const K& F, const MPoly<K>& f) {
    if (f.is_zero()) return f;
    return poly_scale(F, f, F.inv(f.lead().c));
}

// ---------------------------------------------------------------------------
// gcd: content / primitive-part recursion over the highest active variable,
// primitive pseudo-remainder sequence inside.  Coefficient arithmetic is over
// a field, so the base case of the recursion is a unit and the result is
// normalized graded-lex monic.
// ---------------------------------------------------------------------------

namespace detail {

template <class K>
std::vector<MPoly<K>> univ_coeffs(const K& F, const MPoly<K>& f, int v) {
    int d = std::max(f.degree_in(v), 0);
    std::vector<MPoly<K>> cs(d + 1, MPoly<K>::zero(f.arity));
    std::vector<std::vector<typename MPoly<K>::Term>> buckets(d + 1);
    for (auto& t : f.terms) {
        auto m = t.m;
        int e = m.e[v];
        m.e[v] = 0;
        buckets[e].push_back({m, t.c});
    }
    for (int e = 0; e <= d; ++e) cs[e] = poly_normalize<K>(F, f.arity, std::move(buckets[e]));
    return cs;
}

template <class K>
MPoly<K> univ_assemble(const K& F, const std::vector<MPoly<K>>& cs, int v, int arity) {
    std::vector<typename MPoly<K>::Term> out;
    for (size_t e = 0; e < cs.size(); ++e)
        for (auto& t : cs[e].terms) {
            auto m = t.m;
            m.e[v] = uint16_t(m.e[v] + e);
            out.push_back({m, t.c});
        }
    return poly_normalize<K>(F, arity, std::move(out));
}

// pseudo-remainder of f by g viewed in variable v: lc(g)^(df-dg+1) f = q g + r
template <class K>
MPoly<K> pseudo_rem(const K& F, const MPoly<K>& f, const MPoly<K>& g, int v) {
    int dg = g.degree_in(v);
    auto gc = univ_coeffs(F, g, v);
    MPoly<K> lcg = gc[dg];
    MPoly<K> r = f;
    int df = r.degree_in(v);
    while (!r.is_zero() && (df = r.degree_in(v)) >= dg) {
        auto rc = univ_coeffs(F, r, v);
        MPoly<K> lcr = rc[df];
        // r := lc(g) * r - lc(r) * x^(df-dg) * g
        Monomial shift;
        shift.e[v] = uint16_t(df - dg);
        r = poly_sub(F, poly_mul(F, r, lcg), poly_mul(F, poly_mul_term(F, g, shift, F.one()), lcr));
    }
    return r;
}

template <class K>
int highest_active_var(const MPoly<K>& f, const MPoly<K>& g) {
    for (int v = MPOLY_MAX_VARS - 1; v >= 0; --v)
        if (f.depends_on(v) || g.depends_on(v)) return v;
    return -1;
}

template <class K>
int count_active_vars(const MPoly<K>& f, const MPoly<K>& g) {
    int n = 0;
    for (int v = 0; v < MPOLY_MAX_VARS; ++v)
        if (f.depends_on(v) || g.depends_on(v)) ++n;
    return n;
}

// plain Euclid for polynomials in a single shared variable
template <class K>
MPoly<K> gcd_univariate(const K& F, MPoly<K> a, MPoly<K> b, int v) {
    while (!b.is_zero()) {
        // a mod b by field division on leading coefficients
        while (!a.is_zero() && a.degree_in(v) >= b.degree_in(v)) {
            int sh = a.degree_in(v) - b.degree_in(v);
            Monomial m;
            m.e[v] = uint16_t(sh);
            auto q = F.div(a.lead().c, b.lead().c);
            a = poly_sub(F, a, poly_mul_term(F, b, m, q));
        }
        std::swap(a, b);
    }
    return poly_monic(F, a);
}

} // namespace detail

template <class K>
MPoly<K> poly_gcd(const K& F, const MPoly<K>& f, const MPoly<K>& g);

namespace detail {

template <class K>
MPoly<K> poly_content(const K& F, const std::vector<MPoly<K>>& cs) {
    MPoly<K> c = MPoly<K>::zero(cs.empty() ? 0 : cs[0].arity);
    for (auto& x : cs) {
        if (x.is_zero()) continue;
        c = c.is_zero() ? poly_monic(F, x) : poly_gcd(F, c, x);
        if (c.degree() == 0) break; // unit content
    }
    return c;
}

} // namespace detail

template <class K>
MPoly<K> poly_gcd(const K& F, const MPoly<K>& f, const MPoly<K>& g) {
    if (f.is_zero() && g.is_zero()) throw domain_error("gcd(0, 0) undefined");
    if (f.is_zero()) return poly_monic(F, g);
    if (g.is_zero()) return poly_monic(F, f);
    if (f.degree() == 0 || g.degree() == 0)
        return MPoly<K>::constant(F, f.arity, F.one());
    detail::require_same_shape(f, g);

    int v = detail::highest_active_var(f, g);
    if (detail::count_active_vars(f, g) == 1)
        return detail::gcd_univariate(F, f, g, v);

    auto fc = detail::univ_coeffs(F, f, v);
    auto gc = detail::univ_coeffs(F, g, v);
    MPoly<K> contf = detail::poly_content(F, fc);
    MPoly<K> contg = detail::poly_content(F, gc);
    MPoly<K> ppf = *poly_exact_div(F, f, contf);
    MPoly<K> ppg = *poly_exact_div(F, g, contg);
    MPoly<K> cont_gcd = poly_gcd(F, contf, contg);

    // primitive PRS in v
    MPoly<K> a = ppf, b = ppg;
    if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
    while (true) {
        if (b.is_zero()) break;
        if (b.degree_in(v) == 0) {
            // a nonzero v-free primitive remainder forces a v-free gcd part of 1
            b = MPoly<K>::constant(F, f.arity, F.one());
            return poly_monic(F, poly_mul(F, cont_gcd, b));
        }
        MPoly<K> r = detail::pseudo_rem(F, a, b, v);
        if (!r.is_zero()) {
            auto rcs = detail::univ_coeffs(F, r, v);
            MPoly<K> c = detail::poly_content(F, rcs);
            r = *poly_exact_div(F, r, c);
        }
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(F, poly_mul(F, cont_gcd, a));
}

// ---------------------------------------------------------------------------
// perfect-square root extraction
// ---------------------------------------------------------------------------

enum class SqrtRoute { Auto, Gcd, Terms };

namespace detail {

/*
 * Term-by-term route: build A in graded-lex order from the invariant
 * f = A^2.  The leading term of f - A_partial^2 always determines the next
 * term of A (divide by 2*lead(A)); failure of divisibility or running past
 * the degree bound means f is not a square.
 */
template <class K>
std::optional<MPoly<K>> sqrt_by_terms(const K& F, const MPoly<K>& f) {
    const auto& lt = f.lead();
    Monomial half;
    for (int i = 0; i < MPOLY_MAX_VARS; ++i) {
        if (lt.m.e[i] & 1) return std::nullopt;
        half.e[i] = uint16_t(lt.m.e[i] / 2);
    }
    auto lc = F.sqrt(lt.c);
    if (!lc) throw extension_needed("leading coefficient has no square root in the coefficient field");
    MPoly<K> A{f.arity, {{half, *lc}}};
    MPoly<K> R = poly_sub(F, f, poly_mul(F, A, A));
    auto twolead = F.mul(F.from_int(2), *lc);
    size_t guard = 4 * f.terms.size() + 16;
    while (!R.is_zero()) {
        if (A.terms.size() > guard) return std::nullopt;
        const auto& rt = R.lead();
        if (!half.divides(rt.m)) return std::nullopt;
        Monomial dm = rt.m / half;
        auto dc = F.div(rt.c, twolead);
        MPoly<K> delta{f.arity, {{dm, dc}}};
        if (!mono_greater(A.terms.back().m, dm)) return std::nullopt;
        // R -= 2*A*delta + delta^2
        R = poly_sub(F, R, poly_mul(F, poly_scale(F, A, F.from_int(2)), delta));
        R = poly_sub(F, R, poly_mul(F, delta, delta));
        A.terms.push_back(delta.terms.front());
    }
    return A;
}

template <class K>
std::optional<MPoly<K>> sqrt_by_gcd(const K& F, const MPoly<K>& f) {
    int v = -1;
    for (int i = 0; i < MPOLY_MAX_VARS; ++i) {
        if (i < f.arity && !poly_derivative(F, f, i).is_zero()) { v = i; break; }
    }
    if (v < 0) return std::nullopt; // degenerate: handled by the caller
    MPoly<K> g = poly_gcd(F, f, poly_derivative(F, f, v));
    // A is an associate of g when f = A^2 with A squarefree; fix the scalar
    // from the leading coefficients and verify.
    MPoly<K> g2 = poly_mul(F, g, g);
    auto q = poly_exact_div(F, f, g2);
    if (!q || (*q).degree() != 0) return std::nullopt;
    auto s = F.sqrt((*q).lead().c);
    if (!s) throw extension_needed("leading coefficient has no square root in the coefficient field");
    return poly_scale(F, g, *s);
}

} // namespace detail

/*
 * Returns A with A^2 = f, or nullopt when f is not a perfect square.
 * The gcd route follows gcd(f, df/dv); it degenerates when every partial
 * derivative vanishes (all exponents multiples of p), where the term-matching
 * route still applies.  Very large inputs also go to the term route: the
 * pseudo-remainder sequences behind a degree-16 four-variable gcd over the
 * function field are far more expensive than the direct reconstruction, and
 * both routes end with the same A^2 = f verification.
 */
template <class K>
std::optional<MPoly<K>> poly_sqrt(const K& F, const MPoly<K>& f, SqrtRoute route = SqrtRoute::Auto) {
    if (f.is_zero()) throw domain_error("sqrt of the zero polynomial");
    if (f.degree() % 2 != 0) return std::nullopt;

    std::optional<MPoly<K>> A;
    bool degenerate = true;
    for (int i = 0; i < f.arity; ++i)
        if (!poly_derivative(F, f, i).is_zero()) degenerate = false;

    SqrtRoute r = route;
    if (r == SqrtRoute::Auto)
        r = (degenerate || f.num_terms() > 300) ? SqrtRoute::Terms : SqrtRoute::Gcd;
    if (r == SqrtRoute::Gcd && degenerate) r = SqrtRoute::Terms;

    A = (r == SqrtRoute::Gcd) ? detail::sqrt_by_gcd(F, f) : detail::sqrt_by_terms(F, f);
    if (!A) return std::nullopt;
    if (!(poly_mul(F, *A, *A) == f)) return std::nullopt;
    return A;
}

// ---------------------------------------------------------------------------
// printing
// ---------------------------------------------------------------------------

template <class K>
std::string poly_to_string(const K& F, const MPoly<K>& f, const std::vector<std::string>& vars) {
    if (f.is_zero()) return "0";
    std::string s;
    for (auto& t : f.terms) {
        if (!s.empty()) s += " + ";
        std::string cs = F.to_string(t.c);
        bool coeff_shown = false;
        if (cs != "1" || t.m.total() == 0) {
            if (cs.find('+') != std::string::npos || cs.find(' ') != std::string::npos)
                s += "(" + cs + ")";
            else
                s += cs;
            coeff_shown = true;
        }
        for (int v = 0; v < f.arity; ++v) {
            if (!t.m.e[v]) continue;
            if (coeff_shown || s.back() != ' ') {
                if (coeff_shown) s += "*";
                else if (!s.empty() && s.back() != ' ' && s.back() != '+') {} // first factor
            }
            s += vars[v];
            if (t.m.e[v] > 1) s += "^" + std::to_string(t.m.e[v]);
            coeff_shown = true;
        }
    }
    return s;
}

} // namespace kv

#endif
