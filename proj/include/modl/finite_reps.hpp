#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "modl/cyclotomic.hpp"
#include "modl/error.hpp"
#include "modl/rational.hpp"
#include "modl/smallfield.hpp"

namespace modl {

// Character of a cyclic group of order M (equivalently an element g^k),
// stored as the exponent k of a fixed generator.
struct CyclicExponent {
    Int modulus;
    Int exponent;

    CyclicExponent(const Int& M, const Int& k) : modulus(M), exponent(mod_positive(k, M)) {
        if (M < 1) throw domain_error("cyclic modulus must be positive");
    }

    Int order() const { return modulus / boost::multiprecision::gcd(modulus, exponent); }

    friend bool operator==(const CyclicExponent& a, const CyclicExponent& b) {
        return a.modulus == b.modulus && a.exponent == b.exponent;
    }
    friend bool operator!=(const CyclicExponent& a, const CyclicExponent& b) { return !(a == b); }
};

// Characters of the quadratic extension's unit group that stay moved by the
// residue Frobenius; these index the cuspidal series.
inline bool is_regular_green(const CyclicExponent& xi, std::int64_t q) {
    if (xi.modulus != Int(q) * q - 1)
        throw context_mismatch_error("character modulus must be q^2-1");
    return mod_positive(xi.exponent * (q - 1), xi.modulus) != 0;
}

// Conjugacy classes of the rank-2 general linear group over F_q, tagged by
// eigenvalue data: exponents are taken relative to a generator g of the
// quadratic extension's unit group, with g^{q+1} generating the base units.
enum class GL2ClassKind { central, central_unipotent, split, elliptic };

struct GL2Class {
    GL2ClassKind kind;
    Int a;  // central/central_unipotent: exponent mod q-1; elliptic: mod q^2-1
    Int b;  // split only: second exponent mod q-1

    GL2Class(GL2ClassKind kind_, const Int& a_, const Int& b_ = Int(0))
        : kind(kind_), a(a_), b(b_) {}

    friend bool operator==(const GL2Class& x, const GL2Class& y) {
        return x.kind == y.kind && x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const GL2Class& x, const GL2Class& y) { return !(x == y); }
};

inline void check_gl2_class(const GL2Class& cls, std::int64_t q) {
    switch (cls.kind) {
        case GL2ClassKind::central:
        case GL2ClassKind::central_unipotent:
            break;
        case GL2ClassKind::split:
            if (mod_positive(cls.a - cls.b, Int(q - 1)) == 0)
                throw domain_error("split class needs distinct eigenvalue exponents");
            break;
        case GL2ClassKind::elliptic:
            if (mod_positive(cls.a, Int(q + 1)) == 0)
                throw domain_error("elliptic class exponent lies in the base field");
            break;
    }
}

inline Int gl2_class_size(const GL2Class& cls, std::int64_t q) {
    check_gl2_class(cls, q);
    switch (cls.kind) {
        case GL2ClassKind::central: return Int(1);
        case GL2ClassKind::central_unipotent: return Int(q) * q - 1;
        case GL2ClassKind::split: return Int(q) * (q + 1);
        case GL2ClassKind::elliptic: return Int(q) * (q - 1);
    }
    throw domain_error("unknown class kind");
}

inline std::vector<GL2Class> gl2_classes(std::int64_t q) {
    std::vector<GL2Class> out;
    for (std::int64_t a = 0; a < q - 1; ++a) out.emplace_back(GL2ClassKind::central, Int(a));
    for (std::int64_t a = 0; a < q - 1; ++a)
        out.emplace_back(GL2ClassKind::central_unipotent, Int(a));
    for (std::int64_t a = 0; a < q - 1; ++a)
        for (std::int64_t b = a + 1; b < q - 1; ++b)
            out.emplace_back(GL2ClassKind::split, Int(a), Int(b));
    std::int64_t M = q * q - 1;
    for (std::int64_t e = 1; e < M; ++e) {
        if (e % (q + 1) == 0) continue;
        if (e < e * q % M) out.emplace_back(GL2ClassKind::elliptic, Int(e));
    }
    return out;
}

// Cuspidal character value at a conjugacy class: (q-1) xi(z) at the center,
// -xi(z) on its unipotent shadow, zero on split classes, and minus the
// Frobenius-orbit sum on elliptic ones.
inline CycSum green_character_value(const CyclicExponent& xi, std::int64_t q,
                                    const GL2Class& cls) {
    if (!is_regular_green(xi, q)) throw not_regular_error("character is fixed by frobenius");
    check_gl2_class(cls, q);
    std::int64_t M = q * q - 1;
    const Int& k = xi.exponent;
    switch (cls.kind) {
        case GL2ClassKind::central:
            return Int(q - 1) * CycSum::root_of_unity(M, (q + 1) * cls.a * k);
        case GL2ClassKind::central_unipotent:
            return -CycSum::root_of_unity(M, (q + 1) * cls.a * k);
        case GL2ClassKind::split:
            return CycSum(M);
        case GL2ClassKind::elliptic:
            return -(CycSum::root_of_unity(M, cls.a * k) +
                     CycSum::root_of_unity(M, cls.a * k * q));
    }
    throw domain_error("unknown class kind");
}

// Root-of-unity values agree mod the maximal ideal over ell exactly when the
// ratio character has ell-power order.
inline bool congruent_green(const CyclicExponent& x1, const CyclicExponent& x2, const Int& ell) {
    if (x1.modulus != x2.modulus) throw context_mismatch_error("mixed character moduli");
    if (!is_prime(ell)) throw domain_error("congruence modulus must be prime");
    Int o = CyclicExponent(x1.modulus, x1.exponent - x2.exponent).order();
    while (o % ell == 0) o /= ell;
    return o == 1;
}

// Number of cuspidal factors after base change to the ramified quadratic
// extension: 2 exactly when xi^{q-1} has order 2.
inline int base_change_length(const CyclicExponent& xi, std::int64_t q) {
    if (!is_regular_green(xi, q)) throw not_regular_error("character is fixed by frobenius");
    return CyclicExponent(xi.modulus, xi.exponent * (q - 1)).order() == 2 ? 2 : 1;
}

namespace frdetail {

inline void check_tuple(const SmallField& F, const std::vector<int>& u, std::size_t min_size) {
    if (u.size() < min_size) throw shape_mismatch_error("tuple too short");
    for (int x : u)
        if (x <= 0 || x >= F.q()) throw domain_error("tuple entries must be nonzero");
}

}  // namespace frdetail

// Orbit invariant (a_1 ... a_{n-1})^2 a_n a_{n+1} of a generic affine tuple.
inline int simple_cuspidal_normal_form(const SmallField& F, const std::vector<int>& u) {
    frdetail::check_tuple(F, u, 2);
    std::size_t n = u.size() - 1;
    int prod = F.one();
    for (std::size_t i = 0; i + 2 < u.size(); ++i) prod = F.mul(prod, u[i]);
    return F.mul(F.mul(F.mul(prod, prod), u[n - 1]), u[n]);
}

// Diagonal conjugation on generic tuples:
// (u_1 x_1 x_2^{-1}, ..., u_{n-1} x_{n-1} x_n^{-1}, u_n x_n^2, u_{n+1} x_1^{-2}).
inline std::vector<int> iwahori_conjugation_action(const SmallField& F,
                                                   const std::vector<int>& chi,
                                                   const std::vector<int>& u) {
    frdetail::check_tuple(F, chi, 1);
    frdetail::check_tuple(F, u, 2);
    if (u.size() != chi.size() + 1)
        throw shape_mismatch_error("conjugation tuple sizes do not match");
    std::size_t n = chi.size();
    std::vector<int> out(u.size());
    for (std::size_t i = 0; i + 1 < n; ++i)
        out[i] = F.mul(u[i], F.mul(chi[i], F.inv(chi[i + 1])));
    out[n - 1] = F.mul(u[n - 1], F.mul(chi[n - 1], chi[n - 1]));
    int c0inv = F.inv(chi[0]);
    out[n] = F.mul(u[n], F.mul(c0inv, c0inv));
    return out;
}

// Isomorphism classes of simple cuspidal representations: q-1 in residue
// characteristic 2, else 4(q-1).
inline Int count_simple_cuspidals(std::int64_t p, std::int64_t q, int n) {
    if (!is_prime(Int(p))) throw domain_error("residue characteristic must be prime");
    if (n < 1) throw domain_error("tuple length must be positive");
    std::int64_t m = q;
    while (m % p == 0) m /= p;
    if (m != 1 || q < 2) throw domain_error("q must be a power of p");
    return p == 2 ? Int(q - 1) : Int(4) * (q - 1);
}

// Canonical (lexicographically minimal) representatives of the diagonal
// conjugation orbits on generic (n+1)-tuples.
inline std::vector<std::vector<int>> simple_cuspidal_orbit_reps(const SmallField& F, int n) {
    if (n < 1) throw domain_error("tuple length must be positive");
    int units = static_cast<int>(F.q()) - 1;
    std::vector<int> chi(n, 1), u(n + 1, 1);
    std::set<std::vector<int>> reps;
    auto advance = [units](std::vector<int>& t) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (t[i] < units) {
                ++t[i];
                return true;
            }
            t[i] = 1;
        }
        return false;
    };
    do {
        std::vector<int> best = u;
        std::fill(chi.begin(), chi.end(), 1);
        do {
            std::vector<int> img = iwahori_conjugation_action(F, chi, u);
            if (img < best) best = img;
        } while (advance(chi));
        reps.insert(best);
    } while (advance(u));
    return std::vector<std::vector<int>>(reps.begin(), reps.end());
}

// Character-2 exponential sum over diagonal conjugates of a generic tuple,
// with psi = (-1)^{Tr}; each summand is a sign, so the value is an integer.
inline std::int64_t kloosterman_value(const SmallField& F, const std::vector<int>& u, int a) {
    if (F.p() != 2) throw domain_error("residue characteristic must be 2");
    frdetail::check_tuple(F, u, 2);
    if (a <= 0 || a >= F.q()) throw domain_error("tuple entries must be nonzero");
    std::size_t n = u.size() - 1;
    int units = static_cast<int>(F.q()) - 1;
    std::vector<int> chi(n, 1);
    std::int64_t total = 0;
    while (true) {
        int arg = 0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            arg = F.add(arg, F.mul(u[i], F.mul(chi[i], F.inv(chi[i + 1]))));
        arg = F.add(arg, F.mul(u[n - 1], F.mul(chi[n - 1], chi[n - 1])));
        int c0inv = F.inv(chi[0]);
        arg = F.add(arg, F.mul(a, F.mul(u[n], F.mul(c0inv, c0inv))));
        total += F.trace(arg) == 0 ? 1 : -1;
        std::size_t i = 0;
        while (i < n && chi[i] == units) chi[i++] = 1;
        if (i == n) break;
        ++chi[i];
    }
    return total;
}

// Characteristic polynomial over F_q of g^k in the degree-2r extension,
// returned as ascending element codes of that extension's field.
inline std::vector<int> selfdual_charpoly(const SmallField& F, int base_degree, const Int& k) {
    if (F.degree() % base_degree != 0)
        throw domain_error("base degree must divide the extension degree");
    int r2 = F.degree() / base_degree;
    std::int64_t M = F.q() - 1;
    std::int64_t qb = 1;
    for (int i = 0; i < base_degree; ++i) qb *= F.p();
    std::vector<int> poly{F.one()};  // descending build: leading first
    std::int64_t e = static_cast<std::int64_t>(mod_positive(k, Int(M)));
    std::int64_t conj = e;
    for (int i = 0; i < r2; ++i) {
        int root = F.from_log(conj);
        std::vector<int> next(poly.size() + 1, 0);
        for (std::size_t j = 0; j < poly.size(); ++j) {
            next[j] = F.add(next[j], poly[j]);
            next[j + 1] = F.add(next[j + 1], F.neg(F.mul(root, poly[j])));
        }
        poly = std::move(next);
        conj = conj * (qb % M) % M;
    }
    std::reverse(poly.begin(), poly.end());
    for (int c : poly)
        if (!F.in_subfield(c, base_degree))
            throw domain_error("characteristic polynomial leaves the base field");
    return poly;
}

// All exponents k mod q^{2r}-1 whose element has degree exactly 2r over F_q
// and satisfies k(q^r + 1) = 0, i.e. s^{-1} = s^{q^r}; every output's
// characteristic polynomial is checked irreducible and self-reciprocal.
inline std::vector<CyclicExponent> selfdual_cuspidal_params(std::int64_t q, int r) {
    if (r < 1) throw domain_error("extension parameter must be positive");
    SmallField base = SmallField::of_order(q);
    SmallField F(base.p(), 2 * r * base.degree());
    std::int64_t M = F.q() - 1;
    std::vector<CyclicExponent> out;
    std::vector<int> proper;
    for (int m = 1; m < 2 * r; ++m)
        if ((2 * r) % m == 0) proper.push_back(m);
    auto pow_mod = [M](std::int64_t b, int e) {
        std::int64_t acc = 1 % M;
        for (int i = 0; i < e; ++i) acc = acc * (b % M) % M;
        return acc;
    };
    std::int64_t qr = pow_mod(q, r);
    for (std::int64_t k = 1; k < M; ++k) {
        if (k * (qr + 1) % M != 0) continue;
        bool exact = true;
        for (int m : proper)
            if (k * (pow_mod(q, m) - 1) % M == 0) {
                exact = false;
                break;
            }
        if (!exact) continue;
        std::vector<int> cp = selfdual_charpoly(F, base.degree(), Int(k));
        std::set<std::int64_t> conjugates;
        std::int64_t e = k;
        for (int i = 0; i < 2 * r; ++i) {
            conjugates.insert(e);
            e = e * (q % M) % M;
        }
        bool reciprocal = cp.front() == F.one();
        for (std::size_t i = 0; i < cp.size() && reciprocal; ++i)
            if (cp[i] != cp[cp.size() - 1 - i]) reciprocal = false;
        if (conjugates.size() != static_cast<std::size_t>(2 * r) || !reciprocal)
            throw domain_error("self-dual parameter verification failed");
        out.emplace_back(Int(M), Int(k));
    }
    return out;
}

}  // namespace modl
