#ifndef KV_FRACTION_HPP
#define KV_FRACTION_HPP

#include <optional>
#include <string>
#include <utility>

#include "kv/mpoly.hpp"

namespace kv {

/*
 * Fraction field of the polynomial ring K[x_1..x_n].  Elements are reduced:
 * gcd(num, den) is a unit and den is graded-lex monic, which makes structural
 * equality the same as field equality.
 */
template <class K>
class FractionField {
public:
    using Poly = MPoly<K>;

    struct Elt {
        Poly num, den;
        bool operator==(const Elt&) const = default;
    };

    FractionField(const K& base, int arity) : base_(base), arity_(arity) {}

    const K& coeff_field() const { return base_; }
    int arity() const { return arity_; }

    Elt zero() const { return {Poly::zero(arity_), one_poly()}; }
    Elt one() const { return {one_poly(), one_poly()}; }
    Elt from_int(int64_t n) const { return {Poly::constant(base_, arity_, base_.from_int(n)), one_poly()}; }
    Elt from_poly(Poly p) const { return reduce({std::move(p), one_poly()}); }
    Elt from_ratio(Poly n, Poly d) const {
        if (d.is_zero()) throw division_by_zero("fraction with zero denominator");
        return reduce({std::move(n), std::move(d)});
    }
    Elt var(int v) const { return {Poly::variable(base_, arity_, v), one_poly()}; }

    bool is_zero(const Elt& a) const { return a.num.is_zero(); }
    bool eq(const Elt& a, const Elt& b) const { return a == b; }
    bool is_poly(const Elt& a) const { return a.den.degree() == 0; }

    Elt add(const Elt& a, const Elt& b) const {
        if (a.den == b.den)
            return reduce({poly_add(base_, a.num, b.num), a.den});
        return reduce({poly_add(base_, poly_mul(base_, a.num, b.den), poly_mul(base_, b.num, a.den)),
                       poly_mul(base_, a.den, b.den)});
    }
    Elt sub(const Elt& a, const Elt& b) const { return add(a, neg(b)); }
    Elt neg(const Elt& a) const { return {poly_neg(base_, a.num), a.den}; }

    Elt mul(const Elt& a, const Elt& b) const {
        if (a.num.is_zero() || b.num.is_zero()) return zero();
        return reduce({poly_mul(base_, a.num, b.num), poly_mul(base_, a.den, b.den)});
    }

    Elt inv(const Elt& a) const {
        if (a.num.is_zero()) throw division_by_zero("inverse of 0 in fraction field");
        return reduce({a.den, a.num});
    }
    Elt div(const Elt& a, const Elt& b) const { return mul(a, inv(b)); }

    Elt pow(const Elt& a, uint64_t e) const {
        Elt r = one(), base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    std::optional<Elt> sqrt(const Elt& a) const {
        if (is_zero(a)) return zero();
        auto ns = poly_sqrt(base_, a.num, SqrtRoute::Auto);
        if (!ns) return std::nullopt;
        auto ds = poly_sqrt(base_, a.den, SqrtRoute::Auto);
        if (!ds) return std::nullopt;
        return reduce({*ns, *ds});
    }

    int size_of(const Elt& a) const { return a.num.num_terms() + a.den.num_terms(); }

    std::string to_string(const Elt& a, const std::vector<std::string>& vars) const {
        std::string n = poly_to_string(base_, a.num, vars);
        if (is_poly(a)) return n;
        return "(" + n + ")/(" + poly_to_string(base_, a.den, vars) + ")";
    }
    std::string to_string(const Elt& a) const { return to_string(a, default_vars()); }

    std::vector<std::string> default_vars() const {
        std::vector<std::string> v;
        for (int i = 0; i < arity_; ++i) v.push_back("x" + std::to_string(i));
        return v;
    }

    Elt reduce(Elt a) const {
        if (a.num.is_zero()) return zero();
        if (a.den.is_zero()) throw division_by_zero("fraction with zero denominator");
        if (a.den.degree() > 0) {
            Poly g = poly_gcd(base_, a.num, a.den);
            if (g.degree() > 0) {
                a.num = *poly_exact_div(base_, a.num, g);
                a.den = *poly_exact_div(base_, a.den, g);
            }
        }
        auto lc = a.den.lead().c;
        if (!base_.eq(lc, base_.one())) {
            auto ilc = base_.inv(lc);
            a.num = poly_scale(base_, a.num, ilc);
            a.den = poly_scale(base_, a.den, ilc);
        }
        return a;
    }

private:
    Poly one_poly() const { return Poly::constant(base_, arity_, base_.one()); }

    const K& base_;
    int arity_;
};

/*
 * Quadratic extension F[s]/(s^2 - d) of a field F in which d is a non-square.
 * Elements are a + b*s.  Used both for the Kummer coefficient field
 * (s = k00, d = Delta) and for the function field of a Legendre curve
 * (s = y, d = x(x-1)(x-mu)).
 */
template <class F>
class QuadExt {
public:
    using Base = F;
    using BaseElt = typename F::Elt;

    struct Elt {
        BaseElt a, b;
        bool operator==(const Elt&) const = default;
    };

    QuadExt(const F& base, BaseElt d) : base_(base), d_(std::move(d)) {}

    const F& base() const { return base_; }
    const BaseElt& disc() const { return d_; }

    Elt zero() const { return {base_.zero(), base_.zero()}; }
    Elt one() const { return {base_.one(), base_.zero()}; }
    Elt from_int(int64_t n) const { return {base_.from_int(n), base_.zero()}; }
    Elt from_base(BaseElt a) const { return {std::move(a), base_.zero()}; }
    Elt gen() const { return {base_.zero(), base_.one()}; }
    Elt make(BaseElt a, BaseElt b) const { return {std::move(a), std::move(b)}; }

    bool is_zero(const Elt& x) const { return base_.is_zero(x.a) && base_.is_zero(x.b); }
    bool eq(const Elt& x, const Elt& y) const { return x == y; }

    Elt add(const Elt& x, const Elt& y) const { return {base_.add(x.a, y.a), base_.add(x.b, y.b)}; }
    Elt sub(const Elt& x, const Elt& y) const { return {base_.sub(x.a, y.a), base_.sub(x.b, y.b)}; }
    Elt neg(const Elt& x) const { return {base_.neg(x.a), base_.neg(x.b)}; }

    Elt mul(const Elt& x, const Elt& y) const {
        // (a + bs)(a' + b's) = (aa' + bb'd) + (ab' + ba')s
        return {base_.add(base_.mul(x.a, y.a), base_.mul(base_.mul(x.b, y.b), d_)),
                base_.add(base_.mul(x.a, y.b), base_.mul(x.b, y.a))};
    }

    Elt inv(const Elt& x) const {
        if (is_zero(x)) throw division_by_zero("inverse of 0 in quadratic extension");
        // conjugation: 1/(a+bs) = (a-bs)/(a^2 - b^2 d)
        BaseElt n = base_.sub(base_.mul(x.a, x.a), base_.mul(base_.mul(x.b, x.b), d_));
        if (base_.is_zero(n))
            throw internal_inconsistency("zero norm in quadratic extension: discriminant is a square");
        BaseElt ni = base_.inv(n);
        return {base_.mul(x.a, ni), base_.neg(base_.mul(x.b, ni))};
    }
    Elt div(const Elt& x, const Elt& y) const { return mul(x, inv(y)); }

    Elt pow(const Elt& x, uint64_t e) const {
        Elt r = one(), b = x;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    std::optional<Elt> sqrt(const Elt& x) const {
        if (base_.is_zero(x.b)) {
            auto r = base_.sqrt(x.a);
            if (r) return from_base(*r);
        }
        return std::nullopt;
    }

    int size_of(const Elt& x) const { return base_.size_of(x.a) + base_.size_of(x.b); }

    std::string to_string(const Elt& x, const std::string& gen_name = "s") const {
        if (base_.is_zero(x.b)) return base_.to_string(x.a);
        std::string s = base_.to_string(x.a) + " + (" + base_.to_string(x.b) + ")*" + gen_name;
        return s;
    }

private:
    const F& base_;
    BaseElt d_;
};

} // namespace kv

#endif
