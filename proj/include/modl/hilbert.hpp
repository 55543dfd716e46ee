#pragma once

#include <algorithm>
#include <vector>

#include "modl/place.hpp"
#include "modl/rational.hpp"

namespace modl {

inline int legendre_symbol(const Int& a, const Int& p) {
    if (p == 2 || !is_prime(p)) throw domain_error("legendre symbol needs an odd prime");
    Int r = mod_positive(a, p);
    if (r == 0) return 0;
    Int e = boost::multiprecision::powm(r, (p - 1) / 2, p);
    return e == 1 ? +1 : -1;
}

namespace detail {

// Residue of a p-adic unit rational u = n/d (both prime to p) modulo p^k.
inline Int unit_residue(const Rational& u, const Int& pk) {
    Int n = mod_positive(num(u), pk);
    Int d = mod_positive(den(u), pk);
    // d is invertible mod pk; Euler with phi is overkill, use extended gcd.
    Int t0 = 0, t1 = 1, r0 = pk, r1 = d;
    while (r1 != 0) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    return mod_positive(n * t0, pk);
}

inline int eps2(const Int& u_mod8) { return static_cast<int>((u_mod8 - 1) / 2 % 2); }
inline int omega2(const Int& u_mod8) { return static_cast<int>((u_mod8 * u_mod8 - 1) / 8 % 2); }

}  // namespace detail

// Hilbert symbol (a,b)_v over the completion of Q at v: +1 iff
// z^2 = a x^2 + b y^2 has a nontrivial solution there.
inline int hilbert_symbol(const Rational& a, const Rational& b, const Place& v) {
    if (a == 0 || b == 0) throw domain_error("hilbert symbol needs nonzero arguments");
    if (v.is_real()) return (a < 0 && b < 0) ? -1 : +1;

    const Int& p = v.prime();
    int alpha = ell_adic_valuation(a, p);
    int beta = ell_adic_valuation(b, p);
    Rational u = a * rational_pow(Rational(p), -alpha);
    Rational w = b * rational_pow(Rational(p), -beta);

    if (p != 2) {
        int sign = 1;
        if ((alpha % 2 != 0) && (beta % 2 != 0) && ((p - 1) / 2) % 2 != 0) sign = -sign;
        Int up = detail::unit_residue(u, p);
        Int wp = detail::unit_residue(w, p);
        if (beta % 2 != 0 && legendre_symbol(up, p) < 0) sign = -sign;
        if (alpha % 2 != 0 && legendre_symbol(wp, p) < 0) sign = -sign;
        return sign;
    }

    Int u8 = detail::unit_residue(u, Int(8));
    Int w8 = detail::unit_residue(w, Int(8));
    int e = detail::eps2(u8) * detail::eps2(w8)
          + (alpha % 2 != 0 ? detail::omega2(w8) : 0)
          + (beta % 2 != 0 ? detail::omega2(u8) : 0);
    return e % 2 == 0 ? +1 : -1;
}

// True when x is a square in the completion at v.
inline bool is_local_square(const Rational& x, const Place& v) {
    if (x == 0) throw domain_error("square class of zero");
    if (v.is_real()) return x > 0;
    const Int& p = v.prime();
    if (ell_adic_valuation(x, p) % 2 != 0) return false;
    Rational u = x * rational_pow(Rational(p), -ell_adic_valuation(x, p));
    Int a = num(u), b = den(u);
    // b is a unit, and mod 8 every odd unit is its own inverse
    if (p == 2) return mod_positive(a, Int(8)) == mod_positive(b, Int(8));
    return legendre_symbol(a, p) == legendre_symbol(b, p);
}

inline bool same_square_class(const Rational& a, const Rational& b, const Place& v) {
    return is_local_square(a * b, v);
}

// {inf, 2} together with every prime dividing a numerator or denominator;
// (a,b)_v = +1 at every place outside this set.
inline std::vector<Place> hilbert_reciprocity_support(const Rational& a, const Rational& b) {
    if (a == 0 || b == 0) throw domain_error("reciprocity support needs nonzero arguments");
    std::vector<Int> primes{Int(2)};
    for (const Rational& x : {a, b})
        for (const Int& p : prime_support(x)) primes.push_back(p);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    std::vector<Place> out{Place::real()};
    for (const Int& p : primes) out.push_back(Place::finite(p));
    return out;
}

}  // namespace modl
