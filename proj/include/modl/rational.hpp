#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "modl/error.hpp"

namespace modl {

using Int = boost::multiprecision::cpp_int;
// cpp_rational keeps gcd(|num|, den) = 1 and den >= 1 as invariants.
using Rational = boost::multiprecision::cpp_rational;

inline Int num(const Rational& x) { return boost::multiprecision::numerator(x); }
inline Int den(const Rational& x) { return boost::multiprecision::denominator(x); }

inline std::string format_int(const Int& n) { return n.str(); }

// Canonical text form: "n" when the denominator is 1, otherwise "n/d".
inline std::string format_rational(const Rational& x) {
    if (den(x) == 1) return num(x).str();
    return num(x).str() + "/" + den(x).str();
}

inline Int parse_int(const std::string& s) {
    if (s.empty()) throw domain_error("empty integer literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw domain_error("bad integer literal: " + s);
    for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw domain_error("bad integer literal: " + s);
    Int magnitude(s.substr(i));
    return s[0] == '-' ? Int(-magnitude) : magnitude;
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s));
    Int n = parse_int(s.substr(0, slash));
    Int d = parse_int(s.substr(slash + 1));
    if (d == 0) throw domain_error("zero denominator: " + s);
    return Rational(n, d);
}

inline Int abs_int(const Int& n) { return n < 0 ? Int(-n) : n; }

inline Int mod_positive(Int a, const Int& m) {
    a %= m;
    if (a < 0) a += m;
    return a;
}

// Exponent of p in a nonzero integer.
inline int int_valuation(Int n, const Int& p) {
    if (n == 0) throw domain_error("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// Exponent of ell in a nonzero rational.
inline int ell_adic_valuation(const Rational& x, const Int& ell) {
    if (x == 0) throw domain_error("valuation of zero");
    if (ell < 2) throw domain_error("valuation base must be >= 2");
    return int_valuation(num(x), ell) - int_valuation(den(x), ell);
}

inline Rational rational_pow(const Rational& x, int e) {
    if (e == 0) return Rational(1);
    if (x == 0) {
        if (e < 0) throw domain_error("negative power of zero");
        return Rational(0);
    }
    Rational base = e < 0 ? Rational(1) / x : x;
    int k = e < 0 ? -e : e;
    Rational r(1);
    while (k-- > 0) r *= base;
    return r;
}

inline bool is_prime(const Int& n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::int64_t next_prime(std::int64_t n) {
    std::int64_t c = n + 1;
    while (!is_prime(Int(c))) ++c;
    return c;
}

// Prime factorization by trial division; fine for the desk-scale integers
// this library handles.
inline std::map<Int, int> factorize(Int n) {
    if (n == 0) throw domain_error("factorization of zero");
    std::map<Int, int> f;
    n = abs_int(n);
    for (Int d = 2; d * d <= n; ++d) {
        while (n % d == 0) {
            ++f[d];
            n /= d;
        }
    }
    if (n > 1) ++f[n];
    return f;
}

// All positive divisors of |n|, sorted.
inline std::vector<Int> divisors(const Int& n) {
    if (n == 0) throw domain_error("divisors of zero");
    std::vector<Int> ds{1};
    for (const auto& [p, e] : factorize(abs_int(n))) {
        std::size_t sz = ds.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < sz; ++i) ds.push_back(ds[i] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

// Primes dividing numerator or denominator.
inline std::vector<Int> prime_support(const Rational& x) {
    if (x == 0) throw domain_error("support of zero");
    std::map<Int, int> f = factorize(num(x) * den(x));
    std::vector<Int> out;
    for (const auto& [p, e] : f) out.push_back(p);
    return out;
}

// The squarefree integer representing the square class of x in Q^x/(Q^x)^2.
inline Int squarefree_class(const Rational& x) {
    if (x == 0) throw domain_error("square class of zero");
    Int r = 1;
    for (const auto& [p, e] : factorize(num(x) * den(x)))
        if (e % 2 != 0) r *= p;
    return x < 0 ? Int(-r) : r;
}

inline bool is_rational_square(const Rational& x) {
    return x > 0 && squarefree_class(x) == 1;
}

}  // namespace modl
