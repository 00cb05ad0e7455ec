#ifndef KV_HEISENBERG_HPP
#define KV_HEISENBERG_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <string>

#include "kv/fraction.hpp"
#include "kv/gf.hpp"
#include "kv/mpoly.hpp"
#include "kv/smallfield.hpp"

namespace kv {

/*
 * The finite Heisenberg group over H x H^ = (Z/2)^2 x (Z/2)^2 and its
 * weight-1 action on the four theta coordinates.  Elements of H and H^ are
 * two-bit values b1b2 (b1 the high bit); the canonical evaluation is
 * x*(z) = (-1)^(x*1 z1 + x*2 z2).
 */

struct TwoTorsion {
    uint8_t x = 0;     // element of H, 0..3
    uint8_t xstar = 0; // element of H^, 0..3

    bool is_zero() const { return x == 0 && xstar == 0; }
    TwoTorsion operator+(const TwoTorsion& o) const {
        return {uint8_t(x ^ o.x), uint8_t(xstar ^ o.xstar)};
    }
    bool operator==(const TwoTorsion&) const = default;

    // 4-bit label "x1 x2 x*1 x*2", e.g. "0110"
    static TwoTorsion from_string(const std::string& s) {
        if (s.size() != 4 || s.find_first_not_of("01") != std::string::npos)
            throw usage_error("tau must be a 4-bit string, got '" + s + "'");
        return {uint8_t((s[0] - '0') * 2 + (s[1] - '0')), uint8_t((s[2] - '0') * 2 + (s[3] - '0'))};
    }
    std::string to_string() const {
        std::string s = "0000";
        s[0] = char('0' + ((x >> 1) & 1));
        s[1] = char('0' + (x & 1));
        s[2] = char('0' + ((xstar >> 1) & 1));
        s[3] = char('0' + (xstar & 1));
        return s;
    }
};

inline std::array<TwoTorsion, 15> nonzero_torsion() {
    std::array<TwoTorsion, 15> out;
    int k = 0;
    for (int v = 1; v < 16; ++v)
        out[k++] = {uint8_t(v >> 2), uint8_t(v & 3)};
    return out;
}

/* (-1)^<x*, z> as +1/-1 */
inline int pairing_sign(uint8_t xstar, uint8_t z) {
    return (std::popcount(unsigned(xstar & z)) & 1) ? -1 : +1;
}

/* E((x,x*),(y,y*)) = x*(y) y*(x): the commutator pairing. */
inline int e2_pairing(const TwoTorsion& a, const TwoTorsion& b) {
    return pairing_sign(a.xstar, b.x) * pairing_sign(b.xstar, a.x);
}

template <class K>
struct HeisenbergElement {
    typename K::Elt t;
    TwoTorsion tau;
};

template <class K>
struct Mat4 {
    using Elt = typename K::Elt;
    std::array<std::array<Elt, 4>, 4> a;

    static Mat4 zero(const K& F) {
        Mat4 m;
        for (auto& row : m.a)
            for (auto& e : row) e = F.zero();
        return m;
    }
    static Mat4 identity(const K& F) {
        Mat4 m = zero(F);
        for (int i = 0; i < 4; ++i) m.a[i][i] = F.one();
        return m;
    }
};

template <class K>
Mat4<K> mat_mul(const K& F, const Mat4<K>& x, const Mat4<K>& y) {
    Mat4<K> r = Mat4<K>::zero(F);
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            if (F.is_zero(x.a[i][k])) continue;
            for (int j = 0; j < 4; ++j)
                r.a[i][j] = F.add(r.a[i][j], F.mul(x.a[i][k], y.a[k][j]));
        }
    return r;
}

template <class K>
bool mat_eq(const K& F, const Mat4<K>& x, const Mat4<K>& y) {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (!F.eq(x.a[i][j], y.a[i][j])) return false;
    return true;
}

template <class K>
Mat4<K> mat_scale(const K& F, const Mat4<K>& x, const typename K::Elt& c) {
    Mat4<K> r = x;
    for (auto& row : r.a)
        for (auto& e : row) e = F.mul(e, c);
    return r;
}

// the distinguished square root of -1, lifted through the tower
inline BaseField::Elt element_i(const BaseField& F) { return F.element_i(); }
inline Gf::Elt element_i(const Gf& F) { return F.element_i(); }
template <class K>
typename FractionField<K>::Elt element_i(const FractionField<K>& F) {
    return F.from_poly(MPoly<K>::constant(F.coeff_field(), F.arity(), element_i(F.coeff_field())));
}
template <class F>
typename QuadExt<F>::Elt element_i(const QuadExt<F>& Q) {
    return Q.from_base(element_i(Q.base()));
}

/* U_{(t,x,x*)} = t beta_{x*} alpha_x:  U[z][w] = t * x*(z) * [z == w+x]. */
template <class K>
Mat4<K> heisenberg_matrix(const K& F, const HeisenbergElement<K>& g) {
    Mat4<K> m = Mat4<K>::zero(F);
    for (int w = 0; w < 4; ++w) {
        int z = w ^ g.tau.x;
        auto v = g.t;
        if (pairing_sign(g.tau.xstar, uint8_t(z)) < 0) v = F.neg(v);
        m.a[z][w] = v;
    }
    return m;
}

/*
 * The order-2 lift (mu, x, x*) with mu = 1 when x*(x) = 1 and mu = i when
 * x*(x) = -1; its matrix squares to the identity and has determinant 1.
 */
template <class K>
HeisenbergElement<K> order2_lift(const K& F, const TwoTorsion& tau) {
    if (tau.is_zero()) throw domain_error("order2_lift requires a nonzero two-torsion point");
    auto mu = pairing_sign(tau.xstar, tau.x) > 0 ? F.one() : element_i(F);
    return {mu, tau};
}

/*
 * The adapted basis: columns are Lambda_0, Lambda_1, Lambdabar_0, Lambdabar_1
 * expressed in the X-basis.  The first two span the +1 eigenspace of the lift.
 */
template <class K>
struct EigenBasis {
    TwoTorsion tau;
    HeisenbergElement<K> lift;
    std::array<std::array<typename K::Elt, 4>, 4> col; // col[j][z]
};

template <class K>
EigenBasis<K> eigenbasis(const K& F, const TwoTorsion& tau) {
    if (tau.is_zero()) throw domain_error("eigenbasis requires a nonzero two-torsion point");
    EigenBasis<K> eb;
    eb.tau = tau;
    eb.lift = order2_lift(F, tau);
    for (auto& c : eb.col)
        for (auto& e : c) e = F.zero();

    if (tau.x == 0) {
        // permutation of the X-basis: +1 eigenvectors are the X_z with x*(z)=1
        int plus[2], minus[2], np = 0, nm = 0;
        for (int z = 0; z < 4; ++z) {
            if (pairing_sign(tau.xstar, uint8_t(z)) > 0) plus[np++] = z;
            else minus[nm++] = z;
        }
        eb.col[0][plus[0]] = F.one();
        eb.col[1][plus[1]] = F.one();
        eb.col[2][minus[0]] = F.one();
        eb.col[3][minus[1]] = F.one();
        return eb;
    }

    // x != 0: p+-(X_z) = (X_z +- mu x*(x+z) X_{x+z}) / 2, with z in {00, z0}
    int z0 = (tau.x == 0b01) ? 0b10 : 0b01;
    auto half = F.inv(F.from_int(2));
    auto mu = eb.lift.t;
    auto fill = [&](int jplus, int jminus, int z) {
        auto w = F.mul(mu, F.from_int(pairing_sign(tau.xstar, uint8_t(tau.x ^ z))));
        eb.col[jplus][z] = half;
        eb.col[jplus][tau.x ^ z] = F.mul(half, w);
        eb.col[jminus][z] = half;
        eb.col[jminus][tau.x ^ z] = F.neg(F.mul(half, w));
    };
    fill(0, 2, 0);
    fill(1, 3, z0);
    return eb;
}

/*
 * Substitute coordinates by the action of U_g: f(x) -> f(U_g x), extended
 * multiplicatively to any degree.
 */
template <class K>
MPoly<K> act_on_form(const K& F, const HeisenbergElement<K>& g, const MPoly<K>& f) {
    if (f.arity != 4) throw shape_error("forms under the theta action have arity 4");
    Mat4<K> U = heisenberg_matrix(F, g);
    std::vector<MPoly<K>> images;
    for (int z = 0; z < 4; ++z) {
        MPoly<K> im = MPoly<K>::zero(4);
        for (int w = 0; w < 4; ++w)
            im = poly_add(F, im, poly_scale(F, MPoly<K>::variable(F, 4, w), U.a[z][w]));
        images.push_back(im);
    }
    return poly_substitute(F, f, images);
}

/*
 * Restriction to an invariant line: x_z <- (Lambda_0)_z l0 + (Lambda_1)_z l1
 * (the Lambdabar columns for the - line); a binary form of the same degree.
 */
template <class K>
MPoly<K> restrict_form(const K& F, const MPoly<K>& f, const EigenBasis<K>& eb, int sign) {
    if (f.arity != 4) throw shape_error("forms under the theta action have arity 4");
    int base = sign >= 0 ? 0 : 2;
    std::vector<MPoly<K>> images;
    for (int z = 0; z < 4; ++z) {
        MPoly<K> im = poly_add(F, poly_scale(F, MPoly<K>::variable(F, 2, 0), eb.col[base][z]),
                               poly_scale(F, MPoly<K>::variable(F, 2, 1), eb.col[base + 1][z]));
        images.push_back(im);
    }
    return poly_substitute(F, f, images);
}

template <class K>
MPoly<K> restrict_form(const K& F, const MPoly<K>& f, const TwoTorsion& tau, int sign) {
    return restrict_form(F, f, eigenbasis(F, tau), sign);
}

} // namespace kv

#endif
