#ifndef KV_ECARITH_HPP
#define KV_ECARITH_HPP

#include <optional>
#include <vector>

#include "kv/fraction.hpp"
#include "kv/linsolve.hpp"
#include "kv/mpoly.hpp"
#include "kv/smallfield.hpp"

namespace kv {

/*
 * Arithmetic on the Legendre curve y^2 = x(x-1)(x-mu), generic over the
 * coefficient field so the same chord/tangent formulas serve both the
 * numeric oracle and the symbolic multiplication-by-3 derivation.
 */

template <class K>
struct LegendrePoint {
    bool infinity = true;
    typename K::Elt x{}, y{};

    static LegendrePoint at_infinity() { return {}; }
    static LegendrePoint affine(typename K::Elt px, typename K::Elt py) { return {false, px, py}; }
};

template <class K>
typename K::Elt legendre_rhs(const K& F, const typename K::Elt& mu, const typename K::Elt& x) {
    return F.mul(F.mul(x, F.sub(x, F.one())), F.sub(x, mu));
}

template <class K>
bool on_curve(const K& F, const typename K::Elt& mu, const LegendrePoint<K>& P) {
    if (P.infinity) return true;
    return F.eq(F.mul(P.y, P.y), legendre_rhs(F, mu, P.x));
}

template <class K>
LegendrePoint<K> ec_neg(const K& F, const LegendrePoint<K>& P) {
    if (P.infinity) return P;
    return LegendrePoint<K>::affine(P.x, F.neg(P.y));
}

/* Tangent-line duplication; 2-torsion (y = 0) maps to infinity. */
template <class K>
LegendrePoint<K> ec_double(const K& F, const typename K::Elt& mu, const LegendrePoint<K>& P) {
    if (P.infinity || F.is_zero(P.y)) return LegendrePoint<K>::at_infinity();
    auto mu1 = F.add(mu, F.one());
    // alpha = (3x^2 - 2(mu+1)x + mu) / 2y
    auto num = F.add(F.sub(F.mul(F.from_int(3), F.mul(P.x, P.x)),
                           F.mul(F.from_int(2), F.mul(mu1, P.x))),
                     mu);
    auto alpha = F.div(num, F.mul(F.from_int(2), P.y));
    auto beta = F.sub(P.y, F.mul(alpha, P.x));
    auto x2 = F.sub(F.add(F.mul(alpha, alpha), mu1), F.mul(F.from_int(2), P.x));
    auto y2 = F.neg(F.add(F.mul(alpha, x2), beta));
    return LegendrePoint<K>::affine(x2, y2);
}

/* Full chord group law, delegating equal points to the tangent case. */
template <class K>
LegendrePoint<K> ec_add(const K& F, const typename K::Elt& mu, const LegendrePoint<K>& P,
                        const LegendrePoint<K>& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    if (F.eq(P.x, Q.x)) {
        if (F.eq(P.y, F.neg(Q.y))) return LegendrePoint<K>::at_infinity();
        return ec_double(F, mu, P);
    }
    auto alpha = F.div(F.sub(Q.y, P.y), F.sub(Q.x, P.x));
    auto beta = F.sub(P.y, F.mul(alpha, P.x));
    auto x3 = F.sub(F.add(F.mul(alpha, alpha), F.add(mu, F.one())), F.add(P.x, Q.x));
    auto y3 = F.neg(F.add(F.mul(alpha, x3), beta));
    return LegendrePoint<K>::affine(x3, y3);
}

template <class K>
LegendrePoint<K> ec_mul(const K& F, const typename K::Elt& mu, uint64_t n, const LegendrePoint<K>& P) {
    LegendrePoint<K> acc = LegendrePoint<K>::at_infinity();
    LegendrePoint<K> base = P;
    while (n) {
        if (n & 1) acc = ec_add(F, mu, acc, base);
        base = ec_double(F, mu, base);
        n >>= 1;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// division polynomials
// ---------------------------------------------------------------------------

/*
 * psi_m on y'^2 = x'^3 + A x' + B, computed over an arbitrary coefficient
 * field in the variables (A, B, x'): h[m] is the y'-free part, with
 * psi_m = h_m for m odd and psi_m = y' h_m for m even (powers of y'^2 are
 * reduced through the curve equation; the even recurrence divides by 2
 * exactly).
 */
template <class K>
std::vector<MPoly<K>> division_psi_raw(const K& F, int mmax) {
    using P = MPoly<K>;
    const int A = 0, B = 1, X = 2;
    auto C = [&](int64_t n) { return P::constant(F, 3, F.from_int(n)); };
    auto V = [&](int v) { return P::variable(F, 3, v); };
    auto T = [&](int64_t c, uint16_t ea, uint16_t eb, uint16_t ex) {
        return P::term(F, 3, {ea, eb, ex}, F.from_int(c));
    };
    P E = poly_add(F, poly_add(F, poly_pow(F, V(X), 3), poly_mul(F, V(A), V(X))), V(B));
    P E2 = poly_mul(F, E, E);

    std::vector<P> h(mmax + 1, P::zero(3));
    if (mmax >= 0) h[0] = P::zero(3);
    if (mmax >= 1) h[1] = C(1);
    if (mmax >= 2) h[2] = C(2);
    if (mmax >= 3)
        h[3] = poly_add(F, poly_add(F, T(3, 0, 0, 4), T(6, 1, 0, 2)),
                        poly_add(F, T(12, 0, 1, 1), T(-1, 2, 0, 0)));
    if (mmax >= 4) {
        P inner = T(1, 0, 0, 6);
        inner = poly_add(F, inner, T(5, 1, 0, 4));
        inner = poly_add(F, inner, T(20, 0, 1, 3));
        inner = poly_add(F, inner, T(-5, 2, 0, 2));
        inner = poly_add(F, inner, T(-4, 1, 1, 1));
        inner = poly_add(F, inner, T(-8, 0, 2, 0));
        inner = poly_add(F, inner, T(-1, 3, 0, 0));
        h[4] = poly_scale(F, inner, F.from_int(4));
    }
    auto half = F.inv(F.from_int(2));
    for (int m = 5; m <= mmax; ++m) {
        if (m % 2 == 1) {
            int k = (m - 1) / 2; // m = 2k+1, k >= 2
            P first = poly_mul(F, h[k + 2], poly_pow(F, h[k], 3));
            P second = poly_mul(F, h[k - 1], poly_pow(F, h[k + 1], 3));
            if (k % 2 == 0)
                h[m] = poly_sub(F, poly_mul(F, first, E2), second);
            else
                h[m] = poly_sub(F, first, poly_mul(F, second, E2));
        } else {
            int k = m / 2; // k >= 3 here, so k-2 >= 1
            P diff = poly_sub(F, poly_mul(F, h[k + 2], poly_mul(F, h[k - 1], h[k - 1])),
                              poly_mul(F, h[k - 2], poly_mul(F, h[k + 1], h[k + 1])));
            h[m] = poly_scale(F, poly_mul(F, h[k], diff), half);
        }
    }
    return h;
}

/*
 * (psi_p, phi_p) for odd p >= 5 over F_p, as polynomials in (mu, x') after
 * substituting A = (mu^2 - mu + 1)/3 and B = ((mu+1)^3 - 3(mu^3+1))/27.
 */
struct DivisionPolys {
    MPoly<PrimeField> psi; // arity 2: (mu, x')
    MPoly<PrimeField> phi;
};

inline DivisionPolys division_polynomials(uint32_t p) {
    if (p < 5) throw domain_error("division polynomials need p >= 5; p = 3 uses the direct route");
    PrimeField F(p);
    using P = MPoly<PrimeField>;
    auto h = division_psi_raw(F, int(p) + 1);

    const int X3 = 2;
    P E = poly_add(F, poly_add(F, poly_pow(F, P::variable(F, 3, X3), 3),
                               poly_mul(F, P::variable(F, 3, 0), P::variable(F, 3, X3))),
                   P::variable(F, 3, 1));
    // p odd: psi_p = h_p; psi_{p+1} psi_{p-1} = y'^2 h_{p+1} h_{p-1} = E h_{p+1} h_{p-1}
    P phi3 = poly_sub(F, poly_mul(F, P::variable(F, 3, X3), poly_mul(F, h[p], h[p])),
                      poly_mul(F, E, poly_mul(F, h[p + 1], h[p - 1])));

    // substitute A(mu), B(mu); target variables (mu, x')
    auto third = F.inv(F.from_int(3));
    P mu = P::variable(F, 2, 0);
    P xv = P::variable(F, 2, 1);
    P Apoly = poly_scale(F, poly_add(F, poly_sub(F, poly_mul(F, mu, mu), mu), P::constant(F, 2, F.one())), third);
    P mu1cubed = poly_pow(F, poly_add(F, mu, P::constant(F, 2, F.one())), 3);
    P mucubed1 = poly_add(F, poly_pow(F, mu, 3), P::constant(F, 2, F.one()));
    P Bpoly = poly_scale(F, poly_sub(F, mu1cubed, poly_scale(F, mucubed1, F.from_int(3))),
                         F.inv(F.from_int(27)));
    std::vector<P> images = {Apoly, Bpoly, xv};
    return {poly_substitute(F, h[p], images), poly_substitute(F, phi3, images)};
}

// ---------------------------------------------------------------------------
// the multiplication-by-p line map
// ---------------------------------------------------------------------------

/*
 * N, D homogeneous of degree p in (X, Z) with polynomial coefficients in mu
 * (variable order: mu, X, Z), normalized so N is monic in X^p;
 * x([p](x:z)) = (N(x^p, z^p) : D(x^p, z^p)).
 */
struct LineMap {
    uint32_t p = 0;
    MPoly<PrimeField> N; // arity 3: (mu, X, Z)
    MPoly<PrimeField> D;
};

namespace detail {

// map a y'-free polynomial f(mu, x) with every x-exponent divisible by p to
// the homogeneous form F(mu, X, Z) of X-degree deg/p, padded with Z to degree p
inline MPoly<PrimeField> contract_frobenius_exponents(const PrimeField& F, const MPoly<PrimeField>& f,
                                                      uint32_t p, int homdeg) {
    std::vector<MPoly<PrimeField>::Term> out;
    for (auto& t : f.terms) {
        if (t.m.e[1] % p != 0)
            throw internal_inconsistency("multiplication-by-p polynomial has a non-p-power exponent");
        int xd = t.m.e[1] / p;
        if (xd > homdeg) throw internal_inconsistency("degree overflow in line-map extraction");
        out.push_back({Monomial{{t.m.e[0], uint16_t(xd), uint16_t(homdeg - xd), 0}}, t.c});
    }
    return poly_normalize<PrimeField>(F, 3, std::move(out));
}

} // namespace detail

LineMap line_map_p3();

inline LineMap line_map(uint32_t p) {
    if (p == 3) return line_map_p3();
    PrimeField F(p);
    using P = MPoly<PrimeField>;
    auto [psi, phi] = division_polynomials(p);
    P psi2 = poly_mul(F, psi, psi);

    P Nprime = detail::contract_frobenius_exponents(F, phi, p, int(p));
    P Dprime = detail::contract_frobenius_exponents(F, psi2, p, int(p));

    // undo the shift x' = x - (mu+1)/3 z; on the twisted side the shift
    // constant itself gets the Frobenius, and 3^p = 3 in F_p
    P mu = P::variable(F, 3, 0);
    P Xv = P::variable(F, 3, 1);
    P Zv = P::variable(F, 3, 2);
    auto third = F.inv(F.from_int(3));
    P s = poly_scale(F, poly_add(F, mu, P::constant(F, 3, F.one())), third);
    P sp = poly_pow(F, s, p);
    P shifted = poly_sub(F, Xv, poly_mul(F, sp, Zv));
    std::vector<P> images = {mu, shifted, Zv};
    P Dout = poly_substitute(F, Dprime, images);
    P Nout = poly_add(F, poly_substitute(F, Nprime, images), poly_mul(F, s, Dout));

    LineMap lm{p, Nout, Dout};
    // phi_p is monic of degree p^2, so N is already monic in X^p
    return lm;
}

/*
 * p = 3: the closed chord/tangent route.  [3]P is computed symbolically in
 * the function field of the curve (a quadratic extension by y) and the
 * x-coordinate is contracted through x -> x^3.
 */
inline LineMap line_map_p3() {
    PrimeField F(3);
    using P = MPoly<PrimeField>;
    FractionField<PrimeField> Fr(F, 2); // (mu, x)
    using FE = FractionField<PrimeField>::Elt;
    FE mu = Fr.var(0), xv = Fr.var(1);
    FE rhs = Fr.mul(Fr.mul(xv, Fr.sub(xv, Fr.one())), Fr.sub(xv, mu));
    QuadExt<FractionField<PrimeField>> Ky(Fr, rhs);
    using KE = QuadExt<FractionField<PrimeField>>::Elt;

    KE mux = Ky.from_base(mu);
    LegendrePoint<QuadExt<FractionField<PrimeField>>> Pt =
        LegendrePoint<QuadExt<FractionField<PrimeField>>>::affine(Ky.from_base(xv), Ky.gen());
    auto P3 = ec_add(Ky, mux, ec_double(Ky, mux, Pt), Pt);
    if (P3.infinity) throw internal_inconsistency("[3] of a generic point cannot be the origin");
    KE x3 = P3.x;
    if (!Fr.is_zero(x3.b))
        throw internal_inconsistency("x([3]P) must be even in y");

    // x3.a = n(mu,x)/d(mu,x), reduced; contract x -> X^(1/3) and homogenize
    P n = x3.a.num, d = x3.a.den;
    P N1 = detail::contract_frobenius_exponents(F, n, 3, 3);
    P D1 = detail::contract_frobenius_exponents(F, d, 3, 3);
    // normalize N monic in X^3: its X^3 coefficient must be a nonzero constant
    MPoly<PrimeField> lead = P::zero(1);
    for (auto& t : N1.terms)
        if (t.m.e[1] == 3) {
            if (t.m.e[0] != 0) throw internal_inconsistency("X^3 coefficient of N depends on mu");
            lead = P::constant(F, 1, t.c);
        }
    if (lead.is_zero()) throw internal_inconsistency("N misses the X^3 term");
    auto scale = F.inv(lead.lead().c);
    return LineMap{3, poly_scale(F, N1, scale), poly_scale(F, D1, scale)};
}

/*
 * Evaluate the line map at a concrete Legendre parameter.  Supersingular
 * parameters degenerate the separable part to a p-th power; they are flagged,
 * not rejected.
 */
template <class K>
struct LineMapEval {
    MPoly<K> N; // arity 2: (X, Z)
    MPoly<K> D;
    bool supersingular = false;
};

template <class K>
LineMapEval<K> line_map_at(const K& F, const LineMap& lm, const typename K::Elt& mu) {
    if (F.is_zero(mu) || F.eq(mu, F.one()))
        throw degenerate_curve("Legendre parameter must avoid 0 and 1");
    std::vector<typename MPoly<K>::Term> nts, dts;
    auto mu_pow = [&](int e) { return F.pow(mu, e); };
    auto emit = [&](const MPoly<PrimeField>& src, std::vector<typename MPoly<K>::Term>& dst) {
        for (auto& t : src.terms) {
            auto c = F.mul(F.from_int(t.c), mu_pow(t.m.e[0]));
            dst.push_back({Monomial{{t.m.e[1], t.m.e[2], 0, 0}}, c});
        }
    };
    emit(lm.N, nts);
    emit(lm.D, dts);
    LineMapEval<K> ev{poly_normalize<K>(F, 2, std::move(nts)), poly_normalize<K>(F, 2, std::move(dts)), false};
    ev.supersingular = (ev.D.num_terms() == 1 && ev.D.lead().m.e[0] == 0);
    return ev;
}

// ---------------------------------------------------------------------------
// Q0 as a polynomial in omega
// ---------------------------------------------------------------------------

/*
 * The degree-p binary form Q0(l0, l1), monic in l0^p and even in l1, with
 * coefficients rewritten as polynomials in omega = -(a^4+b^4)/(a^2 b^2).
 * coeff[j] multiplies l0^(p-2j) l1^(2j).
 */
struct OmegaForm {
    uint32_t p = 0;
    std::vector<MPoly<PrimeField>> coeff; // arity 1, variable omega

    template <class K>
    typename K::Elt coeff_at(const K& F, int j, const typename K::Elt& omega_value) const {
        const auto& q = coeff[j];
        auto acc = F.zero();
        for (auto& t : q.terms)
            acc = F.add(acc, F.mul(F.from_int(t.c), F.pow(omega_value, t.m.e[0])));
        return acc;
    }
};

inline OmegaForm q0_in_omega(uint32_t p) {
    PrimeField F(p);
    FractionField<PrimeField> Fr(F, 2); // (a, b)
    using FE = FractionField<PrimeField>::Elt;
    using PF = MPoly<FractionField<PrimeField>>;

    FE a = Fr.var(0), b = Fr.var(1);
    FE a2 = Fr.mul(a, a), b2 = Fr.mul(b, b);
    FE s2 = Fr.add(a2, b2);
    FE mu = Fr.pow(Fr.div(s2, Fr.mul(Fr.from_int(2), Fr.mul(a, b))), 2);

    LineMap lm = line_map(p);

    // N, D with coefficients evaluated at mu(a,b), as binary forms over F_p(a,b)
    auto eval_mu = [&](const MPoly<PrimeField>& src) {
        std::vector<PF::Term> ts;
        for (auto& t : src.terms) {
            FE c = Fr.mul(Fr.from_int(t.c), Fr.pow(mu, t.m.e[0]));
            ts.push_back({Monomial{{t.m.e[1], t.m.e[2], 0, 0}}, c});
        }
        return poly_normalize<FractionField<PrimeField>>(Fr, 2, std::move(ts));
    };
    PF N = eval_mu(lm.N), D = eval_mu(lm.D);

    // twisted coordinates of the invariant-line chart: the linear coefficients
    // enter through their p-th powers
    FE u0 = Fr.pow(Fr.neg(Fr.inv(a)), p), u1 = Fr.pow(Fr.inv(b), p);
    FE v0 = Fr.pow(Fr.neg(Fr.div(Fr.mul(Fr.from_int(2), a), s2)), p);
    FE v1 = Fr.pow(Fr.div(Fr.mul(Fr.from_int(2), b), s2), p);
    PF l0 = PF::variable(Fr, 2, 0), l1 = PF::variable(Fr, 2, 1);
    PF u = poly_add(Fr, poly_scale(Fr, l0, u0), poly_scale(Fr, l1, u1));
    PF v = poly_add(Fr, poly_scale(Fr, l0, v0), poly_scale(Fr, l1, v1));
    std::vector<PF> images = {u, v};

    // back to the untwisted chart: Q0 is the l0-row of the inverse coordinate
    // change applied to (N : D), up to one overall scalar
    PF Q = poly_add(Fr, poly_scale(Fr, poly_substitute(Fr, N, images), Fr.div(Fr.mul(Fr.from_int(2), b), s2)),
                    poly_scale(Fr, poly_substitute(Fr, D, images), Fr.neg(Fr.inv(b))));

    // normalize monic in l0^p
    FE lead = Fr.zero();
    for (auto& t : Q.terms)
        if (t.m.e[0] == int(p)) lead = t.c;
    if (Fr.is_zero(lead)) throw internal_inconsistency("Q0 misses the l0^p term");
    Q = poly_scale(Fr, Q, Fr.inv(lead));

    // rewrite every l0^(p-2j) l1^(2j) coefficient as a polynomial in omega
    FE omega_ab = Fr.neg(Fr.div(Fr.add(Fr.pow(a, 4), Fr.pow(b, 4)), Fr.mul(a2, b2)));
    FE clear = Fr.pow(Fr.mul(a2, b2), p);

    std::vector<MPoly<PrimeField>> powers; // omega^t * (a^2 b^2)^p, all polynomial
    for (uint32_t t = 0; t <= p; ++t) {
        FE w = Fr.mul(Fr.pow(omega_ab, t), clear);
        if (!Fr.is_poly(w)) throw internal_inconsistency("omega power failed to clear denominators");
        powers.push_back(w.num);
    }

    OmegaForm out{p, {}};
    for (uint32_t j = 0; j * 2 <= p; ++j) {
        FE c = Fr.zero();
        bool odd_seen = false;
        for (auto& t : Q.terms) {
            if (t.m.e[0] == int(p - 2 * j) && t.m.e[1] == int(2 * j)) c = t.c;
            if (t.m.e[1] % 2 == 1) odd_seen = true;
        }
        if (odd_seen) throw internal_inconsistency("Q0 has an odd power of l1");
        FE rhs = Fr.mul(c, clear);
        if (!Fr.is_poly(rhs))
            throw internal_inconsistency("Q0 coefficient is not a function of omega alone");

        // match monomial coefficients: sum_t gamma_t * powers[t] = rhs over F_p
        std::vector<Monomial> monos;
        auto collect = [&](const MPoly<PrimeField>& f) {
            for (auto& t : f.terms) {
                bool found = false;
                for (auto& m : monos) found = found || (m == t.m);
                if (!found) monos.push_back(t.m);
            }
        };
        for (auto& w : powers) collect(w);
        collect(rhs.num);
        auto coeff_of = [&](const MPoly<PrimeField>& f, const Monomial& m) {
            for (auto& t : f.terms)
                if (t.m == m) return t.c;
            return F.zero();
        };
        std::vector<std::vector<PrimeField::Elt>> A;
        std::vector<PrimeField::Elt> bvec;
        for (auto& m : monos) {
            std::vector<PrimeField::Elt> row;
            for (auto& w : powers) row.push_back(coeff_of(w, m));
            A.push_back(std::move(row));
            bvec.push_back(coeff_of(rhs.num, m));
        }
        auto sol = linsolve(F, std::move(A), std::move(bvec));
        if (!sol.consistent || !sol.unique)
            throw internal_inconsistency("omega rewrite system inconsistent for coefficient " + std::to_string(j));
        std::vector<MPoly<PrimeField>::Term> qt;
        for (uint32_t t = 0; t <= p; ++t)
            if (sol.solution[t]) qt.push_back({Monomial{{uint16_t(t), 0, 0, 0}}, sol.solution[t]});
        out.coeff.push_back(poly_normalize<PrimeField>(F, 1, std::move(qt)));
    }
    return out;
}

} // namespace kv

#endif
