#ifndef KV_KUMMER_HPP
#define KV_KUMMER_HPP

#include <string>
#include <utility>
#include <vector>

#include "kv/heisenberg.hpp"
#include "kv/kummer_field.hpp"
#include "kv/mpoly.hpp"

namespace kv {

template <class K>
struct KummerCoeffs {
    typename K::Elt k00, k01, k10, k11;
};

/* The coefficients as the generators of the symbolic quotient field. */
inline KummerCoeffs<KummerField> symbolic_coeffs(const KummerTower& T) {
    return {T.k00(), T.k01(), T.k10(), T.k11()};
}

inline KummerCoeffs<Gf> specialized_coeffs(const Specialization& sp) {
    return {sp.k00, sp.k01, sp.k10, sp.k11};
}

/*
 * The Kummer quartic  S + 2 k00 P + k01 Q01 + k10 Q10 + k11 Q11  with
 *   S = sum x_z^4,  P = x00 x01 x10 x11,
 *   Q01 = x00^2 x01^2 + x10^2 x11^2,  Q10 = x00^2 x10^2 + x01^2 x11^2,
 *   Q11 = x00^2 x11^2 + x01^2 x10^2.
 */
template <class K>
MPoly<K> kummer_equation(const K& F, const KummerCoeffs<K>& k) {
    using P4 = MPoly<K>;
    std::vector<typename P4::Term> ts;
    auto push = [&](uint16_t a, uint16_t b, uint16_t c, uint16_t d, typename K::Elt coeff) {
        if (!F.is_zero(coeff)) ts.push_back({Monomial{{a, b, c, d}}, coeff});
    };
    auto one = F.one();
    push(4, 0, 0, 0, one);
    push(0, 4, 0, 0, one);
    push(0, 0, 4, 0, one);
    push(0, 0, 0, 4, one);
    push(1, 1, 1, 1, F.mul(F.from_int(2), k.k00));
    push(2, 2, 0, 0, k.k01);
    push(0, 0, 2, 2, k.k01);
    push(2, 0, 2, 0, k.k10);
    push(0, 2, 0, 2, k.k10);
    push(2, 0, 0, 2, k.k11);
    push(0, 2, 2, 0, k.k11);
    return poly_normalize<K>(F, 4, std::move(ts));
}

/* 4 + k01 k10 k11 - k01^2 - k10^2 - k11^2 + k00^2, zero iff the relation holds. */
template <class K>
typename K::Elt kummer_relation_value(const K& F, const KummerCoeffs<K>& k) {
    auto sq = [&](const typename K::Elt& v) { return F.mul(v, v); };
    auto r = F.add(F.from_int(4), F.mul(F.mul(k.k01, k.k10), k.k11));
    r = F.sub(r, sq(k.k01));
    r = F.sub(r, sq(k.k10));
    r = F.sub(r, sq(k.k11));
    return F.add(r, sq(k.k00));
}

struct GenericityReport {
    bool relation_holds = false;
    std::vector<std::pair<std::string, bool>> clauses;
    bool all_generic() const {
        for (auto& [n, ok] : clauses)
            if (!ok) return false;
        return true;
    }
};

template <class K>
GenericityReport check_relation_and_genericity(const K& F, const KummerCoeffs<K>& k) {
    GenericityReport rep;
    rep.relation_holds = F.is_zero(kummer_relation_value(F, k));
    rep.clauses = genericity_clauses(F, k.k00, k.k01, k.k10, k.k11);
    return rep;
}

// ---------------------------------------------------------------------------
// theta constants
// ---------------------------------------------------------------------------

template <class K>
struct ThetaConstants {
    typename K::Elt t00, t01, t10, t11;

    std::array<typename K::Elt, 4> as_array() const { return {t00, t01, t10, t11}; }
};

template <class K>
std::vector<std::pair<std::string, bool>> theta_nondegeneracy(const K& F, const ThetaConstants<K>& th) {
    auto sq = [&](const typename K::Elt& v) { return F.mul(v, v); };
    std::vector<std::pair<std::string, bool>> out;
    auto add = [&](const std::string& n, const typename K::Elt& v) { out.emplace_back(n, !F.is_zero(v)); };
    auto p0 = F.mul(th.t00, th.t01), p1 = F.mul(th.t10, th.t11);
    auto p2 = F.mul(th.t00, th.t10), p3 = F.mul(th.t01, th.t11);
    auto p4 = F.mul(th.t00, th.t11), p5 = F.mul(th.t01, th.t10);
    add("t00t01 != t10t11", F.sub(p0, p1));
    add("t00t01 != -t10t11", F.add(p0, p1));
    add("t00t10 != t01t11", F.sub(p2, p3));
    add("t00t10 != -t01t11", F.add(p2, p3));
    add("t00t11 != t01t10", F.sub(p4, p5));
    add("t00t11 != -t01t10", F.add(p4, p5));
    auto s00 = sq(th.t00), s01 = sq(th.t01), s10 = sq(th.t10), s11 = sq(th.t11);
    add("t00^2+t01^2 != t10^2+t11^2", F.sub(F.add(s00, s01), F.add(s10, s11)));
    add("t00^2+t10^2 != t01^2+t11^2", F.sub(F.add(s00, s10), F.add(s01, s11)));
    add("t00^2+t11^2 != t01^2+t10^2", F.sub(F.add(s00, s11), F.add(s01, s10)));
    add("sum t^2 != 0", F.add(F.add(s00, s01), F.add(s10, s11)));
    return out;
}

/*
 * k01, k10, k11 by the displayed quotients; k00 solved from the vanishing of
 * a partial derivative of the quartic at the node (the theta point), then
 * cross-checked against the cubic relation.
 */
template <class K>
KummerCoeffs<K> coeffs_from_theta_constants(const K& F, const ThetaConstants<K>& th) {
    auto sq = [&](const typename K::Elt& v) { return F.mul(v, v); };
    auto p4 = [&](const typename K::Elt& v) { return F.mul(F.mul(v, v), F.mul(v, v)); };
    auto q00 = p4(th.t00), q01 = p4(th.t01), q10 = p4(th.t10), q11 = p4(th.t11);

    auto safe_div = [&](const typename K::Elt& n, const typename K::Elt& d) {
        if (F.is_zero(d)) throw degenerate_theta("vanishing denominator in theta-constant formulas");
        return F.div(n, d);
    };

    KummerCoeffs<K> k;
    k.k01 = F.neg(safe_div(F.sub(F.add(q00, q01), F.add(q10, q11)),
                           F.sub(F.mul(sq(th.t00), sq(th.t01)), F.mul(sq(th.t10), sq(th.t11)))));
    k.k10 = F.neg(safe_div(F.add(F.sub(q00, q01), F.sub(q10, q11)),
                           F.sub(F.mul(sq(th.t00), sq(th.t10)), F.mul(sq(th.t01), sq(th.t11)))));
    k.k11 = F.neg(safe_div(F.add(F.sub(q00, q01), F.sub(q11, q10)),
                           F.sub(F.mul(sq(th.t00), sq(th.t11)), F.mul(sq(th.t01), sq(th.t10)))));

    // node condition: the partial wrt x_z gives
    //   2 t_z^3 + k00 * prod_{w != z} t_w + sum_w k_{z^w} t_z t_w^2 = 0
    auto t = th.as_array();
    auto kq = [&](int idx) { return idx == 1 ? k.k01 : idx == 2 ? k.k10 : k.k11; };
    int zpick = -1;
    typename K::Elt prod = F.zero();
    for (int z = 0; z < 4 && zpick < 0; ++z) {
        auto pr = F.one();
        for (int w = 0; w < 4; ++w)
            if (w != z) pr = F.mul(pr, t[w]);
        if (!F.is_zero(pr)) {
            zpick = z;
            prod = pr;
        }
    }
    if (zpick < 0) throw degenerate_theta("theta constants vanish on every coordinate triple");
    auto num = F.mul(F.from_int(2), F.mul(F.mul(t[zpick], t[zpick]), t[zpick]));
    for (int w = 0; w < 4; ++w) {
        if (w == zpick) continue;
        num = F.add(num, F.mul(kq(zpick ^ w), F.mul(t[zpick], sq(t[w]))));
    }
    k.k00 = F.neg(F.div(num, prod));

    if (!F.is_zero(kummer_relation_value(F, k)))
        throw internal_inconsistency("theta-derived coefficients violate the cubic relation");
    return k;
}

// ---------------------------------------------------------------------------
// the omega invariant of an invariant line
// ---------------------------------------------------------------------------

/*
 * Restricts the quartic to the chosen invariant line of tau, normalizes the
 * l0^4 coefficient to 1 and reads off omega from
 * l0^4 + l1^4 + omega l0^2 l1^2; the shape itself is asserted.
 */
template <class K>
typename K::Elt omega(const K& F, const KummerCoeffs<K>& k, const TwoTorsion& tau, int sign = +1) {
    if (tau.is_zero()) throw domain_error("omega requires a nonzero two-torsion point");
    MPoly<K> quartic = kummer_equation(F, k);
    MPoly<K> r = restrict_form(F, quartic, tau, sign);
    typename K::Elt c40 = F.zero(), c04 = F.zero(), c22 = F.zero();
    for (auto& t : r.terms) {
        if (t.m.e[0] == 4 && t.m.e[1] == 0) c40 = t.c;
        else if (t.m.e[0] == 0 && t.m.e[1] == 4) c04 = t.c;
        else if (t.m.e[0] == 2 && t.m.e[1] == 2) c22 = t.c;
        else throw internal_inconsistency("restricted quartic has unexpected monomial shape");
    }
    if (F.is_zero(c40)) throw internal_inconsistency("restricted quartic is degenerate in l0");
    auto inv40 = F.inv(c40);
    if (!F.eq(F.mul(c04, inv40), F.one()))
        throw internal_inconsistency("restricted quartic is not balanced: l1^4 coefficient differs");
    auto w = F.mul(c22, inv40);
    auto two = F.from_int(2);
    if (F.is_zero(F.sub(w, two)) || F.is_zero(F.add(w, two)))
        throw genericity_error("omega(tau) = +-2 on " + tau.to_string());
    return w;
}

// ---------------------------------------------------------------------------
// Frobenius twist
// ---------------------------------------------------------------------------

inline KummerCoeffs<KummerField> frobenius_twist(const KummerTower& T, const KummerCoeffs<KummerField>& k) {
    return {T.frobenius(k.k00), T.frobenius(k.k01), T.frobenius(k.k10), T.frobenius(k.k11)};
}

inline KummerCoeffs<Gf> frobenius_twist(const Gf& F, const KummerCoeffs<Gf>& k) {
    return {F.frobenius(k.k00), F.frobenius(k.k01), F.frobenius(k.k10), F.frobenius(k.k11)};
}

} // namespace kv

#endif
