#ifndef KV_KUMMER_FIELD_HPP
#define KV_KUMMER_FIELD_HPP

#include <array>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kv/fraction.hpp"
#include "kv/gf.hpp"
#include "kv/smallfield.hpp"

namespace kv {

using RatFunc3 = FractionField<BaseField>;
using KummerField = QuadExt<RatFunc3>;
using KummerScalar = KummerField::Elt;

/*
 * The coefficient universe of every symbolic derivation:
 *
 *   F_p(k01, k10, k11)[k00] / (k00^2 - Delta),
 *   Delta = k01^2 + k10^2 + k11^2 - k01*k10*k11 - 4,
 *
 * a degree-2 field extension of the rational function field (Delta is a
 * non-square there; inversion asserts this rather than proving it).  The base
 * field carries a distinguished square root of -1.
 */
class KummerTower {
public:
    explicit KummerTower(uint32_t p)
        : base_(p), rf_(base_, 3), kf_(rf_, delta_fraction(base_, rf_)) {}

    uint32_t p() const { return base_.p(); }
    const BaseField& base() const { return base_; }
    const RatFunc3& ratfunc() const { return rf_; }
    const KummerField& field() const { return kf_; }

    KummerScalar k00() const { return kf_.gen(); }
    KummerScalar k01() const { return kf_.from_base(rf_.var(0)); }
    KummerScalar k10() const { return kf_.from_base(rf_.var(1)); }
    KummerScalar k11() const { return kf_.from_base(rf_.var(2)); }

    RatFunc3::Elt delta() const { return kf_.disc(); }

    static MPoly<BaseField> delta_poly(const BaseField& B) {
        using P = MPoly<BaseField>;
        auto sq = [&](int v) { return P::term(B, 3, make_exps(v, 2), B.one()); };
        P d = poly_add(B, poly_add(B, sq(0), sq(1)), sq(2));
        d = poly_sub(B, d, P::term(B, 3, {1, 1, 1, 0}, B.one()));
        d = poly_sub(B, d, P::constant(B, 3, B.from_int(4)));
        return d;
    }

    // s^p, using (c0 + c1*k00)^p = c0^p + c1^p * k00 * Delta^((p-1)/2)
    KummerScalar frobenius(const KummerScalar& s) const {
        auto c0 = ratfunc_frobenius(s.a);
        auto c1 = ratfunc_frobenius(s.b);
        auto dpow = rf_.pow(kf_.disc(), (p() - 1) / 2);
        return kf_.make(c0, rf_.mul(c1, dpow));
    }

    RatFunc3::Elt ratfunc_frobenius(const RatFunc3::Elt& f) const {
        return RatFunc3::Elt{poly_frobenius(f.num), poly_frobenius(f.den)};
    }

    MPoly<BaseField> poly_frobenius(const MPoly<BaseField>& f) const {
        MPoly<BaseField> r = f;
        for (auto& t : r.terms) {
            t.c = base_.frobenius(t.c);
            for (auto& e : t.m.e) e = uint16_t(e * p());
        }
        return r;
    }

    std::string to_string(const KummerScalar& s) const {
        static const std::vector<std::string> kv = {"k01", "k10", "k11"};
        if (rf_.is_zero(s.b)) return rf_.to_string(s.a, kv);
        return rf_.to_string(s.a, kv) + " + (" + rf_.to_string(s.b, kv) + ")*k00";
    }

private:
    static std::array<uint16_t, MPOLY_MAX_VARS> make_exps(int v, uint16_t e) {
        std::array<uint16_t, MPOLY_MAX_VARS> a{};
        a[v] = e;
        return a;
    }

    static RatFunc3::Elt delta_fraction(const BaseField& B, const RatFunc3& rf) {
        return rf.from_poly(delta_poly(B));
    }

    BaseField base_;
    RatFunc3 rf_;
    KummerField kf_;
};

/* 1/s via conjugation: (c0 - c1 k00) / (c0^2 - c1^2 Delta). */
inline KummerScalar kummer_invert(const KummerField& F, const KummerScalar& s) {
    return F.inv(s);
}

template <class K>
typename K::Elt poly_sign(const K& F, const typename K::Elt& v, int s) {
    return s >= 0 ? v : F.neg(v);
}

/*
 * The genericity inequalities: each listed expression must be nonzero.
 * Clause names follow the chart rows so failures are reportable.
 */
template <class K>
std::vector<std::pair<std::string, bool>>
genericity_clauses(const K& F, const typename K::Elt& k00, const typename K::Elt& k01,
                   const typename K::Elt& k10, const typename K::Elt& k11) {
    using E = typename K::Elt;
    auto two = F.from_int(2);
    std::vector<std::pair<std::string, bool>> out;
    auto add_ne = [&](const std::string& name, const E& v) { out.emplace_back(name, !F.is_zero(v)); };
    add_ne("k01 != 2", F.sub(k01, two));
    add_ne("k01 != -2", F.add(k01, two));
    add_ne("k10 != 2", F.sub(k10, two));
    add_ne("k10 != -2", F.add(k10, two));
    add_ne("k11 != 2", F.sub(k11, two));
    add_ne("k11 != -2", F.add(k11, two));
    // rows k01+k10+k11+2 +- k00, k01+k10-k11-2 +- k00, ...
    struct Row { int s01, s10, s11, s2; const char* name; };
    const Row rows[] = {
        {+1, +1, +1, +2, "k01+k10+k11+2"},
        {+1, +1, -1, -2, "k01+k10-k11-2"},
        {+1, -1, +1, -2, "k01-k10+k11-2"},
        {-1, +1, +1, -2, "-k01+k10+k11-2"},
    };
    for (auto& r : rows) {
        E base = F.add(F.add(poly_sign(F, k01, r.s01), poly_sign(F, k10, r.s10)),
                       F.add(poly_sign(F, k11, r.s11), F.from_int(r.s2)));
        add_ne(std::string(r.name) + "+k00", F.add(base, k00));
        add_ne(std::string(r.name) + "-k00", F.sub(base, k00));
    }
    return out;
}

/*
 * A numeric assignment of the Kummer coefficients in F_{p^m}: seeds are
 * explicit and drawing is rejection sampling against the genericity locus.
 * Assignments with Delta a non-square get rejected too, so k00 always lives
 * in the same field as the other coefficients.
 */
struct Specialization {
    Gf field;
    Gf::Elt k00, k01, k10, k11;
    uint64_t seed = 0;
    int m = 1;

    Gf::Elt delta() const {
        const Gf& F = field;
        auto sq = [&](const Gf::Elt& x) { return F.mul(x, x); };
        auto d = F.add(F.add(sq(k01), sq(k10)), sq(k11));
        d = F.sub(d, F.mul(F.mul(k01, k10), k11));
        return F.sub(d, F.from_int(4));
    }
};

inline Specialization draw_specialization(uint32_t p, int m, uint64_t seed) {
    Gf F(p, m);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Specialization sp{F, {}, F.random(rng), F.random(rng), F.random(rng), seed, m};
        auto d = sp.delta();
        if (F.is_zero(d) || !F.is_square(d)) continue;
        sp.k00 = *F.sqrt(d);
        auto clauses = genericity_clauses(F, sp.k00, sp.k01, sp.k10, sp.k11);
        bool ok = true;
        for (auto& [name, pass] : clauses) ok = ok && pass;
        if (!ok) continue;
        return sp;
    }
    throw exhaustion_error("no generic specialization found in 1000 draws; the field p^" +
                           std::to_string(m) + " is too small");
}

/* Exact image of a Kummer scalar under the evaluation homomorphism. */
inline Gf::Elt specialize(const KummerTower& T, const KummerScalar& s, const Specialization& sp) {
    const Gf& F = sp.field;
    if (F.p() != T.p()) throw shape_error("specialization characteristic mismatch");
    std::vector<Gf::Elt> pt = {sp.k01, sp.k10, sp.k11};
    std::optional<Gf::Elt> igf; // sqrt(-1), materialized only if some coefficient needs it
    auto map_coeff = [&](const BaseField::Elt& c) {
        auto v = F.from_int(c.re);
        if (c.im) {
            if (!igf) igf = F.element_i();
            v = F.add(v, F.mul(F.from_int(c.im), *igf));
        }
        return v;
    };
    auto eval_poly = [&](const MPoly<BaseField>& f) {
        auto acc = F.zero();
        for (auto& t : f.terms) {
            auto val = map_coeff(t.c);
            for (int v = 0; v < 3; ++v)
                for (int e = 0; e < t.m.e[v]; ++e) val = F.mul(val, pt[v]);
            acc = F.add(acc, val);
        }
        return acc;
    };
    auto eval_rf = [&](const RatFunc3::Elt& r) {
        auto dv = eval_poly(r.den);
        if (F.is_zero(dv)) throw unlucky_specialization("denominator vanishes at the assignment");
        return F.div(eval_poly(r.num), dv);
    };
    return F.add(eval_rf(s.a), F.mul(eval_rf(s.b), sp.k00));
}

} // namespace kv

#endif
