#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "modl/coeff.hpp"
#include "modl/error.hpp"
#include "modl/rational.hpp"

namespace modl {

namespace ffdetail {

using Poly = std::vector<std::int64_t>;  // coefficient i of x^i, reduced mod ell

inline std::int64_t mod64(std::int64_t a, std::int64_t m) {
    a %= m;
    return a < 0 ? a + m : a;
}

inline std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    std::int64_t t0 = 0, t1 = 1, r0 = m, r1 = mod64(a, m);
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw domain_error("element not invertible");
    return mod64(t0, m);
}

// Remainder of a by the monic modulus m, all coefficients mod ell.
inline Poly poly_rem(Poly a, const Poly& m, std::int64_t ell) {
    int dm = static_cast<int>(m.size()) - 1;
    while (static_cast<int>(a.size()) - 1 >= dm) {
        int da = static_cast<int>(a.size()) - 1;
        std::int64_t lead = a[da];
        if (lead != 0)
            for (int i = 0; i <= dm; ++i)
                a[da - dm + i] = mod64(a[da - dm + i] - lead * m[i], ell);
        a.pop_back();
    }
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline Poly poly_mul(const Poly& a, const Poly& b, std::int64_t ell) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = mod64(r[i + j] + a[i] * b[j], ell);
    return r;
}

inline bool has_root(const Poly& f, std::int64_t ell) {
    for (std::int64_t r = 0; r < ell; ++r) {
        std::int64_t v = 0;
        for (auto it = f.rbegin(); it != f.rend(); ++it) v = mod64(v * r + *it, ell);
        if (v == 0) return true;
    }
    return false;
}

inline bool divides(const Poly& d, const Poly& f, std::int64_t ell) {
    return poly_rem(f, d, ell).empty();
}

inline bool is_irreducible(const Poly& f, std::int64_t ell) {
    int deg = static_cast<int>(f.size()) - 1;
    if (deg == 1) return true;
    if (has_root(f, ell)) return false;
    if (deg <= 3) return true;
    // degree 4: also exclude products of two irreducible quadratics
    for (std::int64_t b = 0; b < ell; ++b)
        for (std::int64_t c = 0; c < ell; ++c) {
            Poly q{c, b, 1};
            if (!has_root(q, ell) && divides(q, f, ell)) return false;
        }
    return deg == 4;
}

// Canonical modulus for F_{ell^k}: the first monic irreducible of degree k
// when candidates x^k + a_{k-1} x^{k-1} + ... + a_0 are enumerated in
// lexicographic order of (a_{k-1}, ..., a_0).  Cached per (ell, k).
inline const Poly& canonical_modulus(std::int64_t ell, int k) {
    static std::map<std::pair<std::int64_t, int>, Poly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(ell, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::vector<std::int64_t> a(k, 0);
    for (;;) {
        Poly f(k + 1, 0);
        f[k] = 1;
        for (int i = 0; i < k; ++i) f[k - 1 - i] = a[i];
        if (is_irreducible(f, ell)) return cache.emplace(key, std::move(f)).first->second;
        int i = k - 1;
        while (i >= 0 && a[i] == ell - 1) a[i--] = 0;
        if (i < 0) throw domain_error("no irreducible modulus found");
        ++a[i];
    }
}

}  // namespace ffdetail

// Element of F_{ell^k}, k <= 4, as a polynomial in the class of x modulo the
// canonical irreducible modulus for (ell, k).
class FiniteFieldElem {
public:
    FiniteFieldElem() = default;
    FiniteFieldElem(std::int64_t ell, int deg, std::vector<std::int64_t> coeffs)
        : ell_(ell), deg_(deg) {
        if (!is_prime(Int(ell))) throw domain_error("field characteristic must be prime");
        if (deg < 1 || deg > 4) throw domain_error("supported extension degrees are 1..4");
        c_.fill(0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (static_cast<int>(i) >= deg && ffdetail::mod64(coeffs[i], ell) != 0)
                throw domain_error("coefficient vector longer than field degree");
            if (static_cast<int>(i) < deg) c_[i] = ffdetail::mod64(coeffs[i], ell);
        }
    }

    static FiniteFieldElem from_integer(std::int64_t ell, int deg, const Int& n) {
        Int r = mod_positive(n, Int(ell));
        return FiniteFieldElem(ell, deg, {static_cast<std::int64_t>(r)});
    }
    static FiniteFieldElem from_rational(std::int64_t ell, int deg, const Rational& x) {
        if (ell_adic_valuation_or_zero(x, ell) < 0)
            throw not_integral_error("denominator divisible by " + std::to_string(ell));
        Int n = mod_positive(num(x), Int(ell));
        Int d = mod_positive(den(x), Int(ell));
        std::int64_t nn = static_cast<std::int64_t>(n);
        std::int64_t dd = static_cast<std::int64_t>(d);
        return FiniteFieldElem(ell, deg,
                               {ffdetail::mod64(nn * ffdetail::inv_mod(dd, ell), ell)});
    }
    static FiniteFieldElem zero(std::int64_t ell, int deg) { return FiniteFieldElem(ell, deg, {}); }
    static FiniteFieldElem one(std::int64_t ell, int deg) { return FiniteFieldElem(ell, deg, {1}); }
    // The class of x in the canonical model.
    static FiniteFieldElem generator_poly(std::int64_t ell, int deg) {
        if (deg < 2) throw domain_error("polynomial generator needs degree >= 2");
        return FiniteFieldElem(ell, deg, {0, 1});
    }

    std::int64_t ell() const { return ell_; }
    int degree() const { return deg_; }
    std::vector<std::int64_t> coeffs() const {
        return std::vector<std::int64_t>(c_.begin(), c_.begin() + deg_);
    }
    bool is_zero() const {
        for (int i = 0; i < deg_; ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    friend FiniteFieldElem operator+(const FiniteFieldElem& a, const FiniteFieldElem& b) {
        a.check_same(b);
        FiniteFieldElem r = a;
        for (int i = 0; i < a.deg_; ++i) r.c_[i] = ffdetail::mod64(a.c_[i] + b.c_[i], a.ell_);
        return r;
    }
    friend FiniteFieldElem operator-(const FiniteFieldElem& a, const FiniteFieldElem& b) {
        a.check_same(b);
        FiniteFieldElem r = a;
        for (int i = 0; i < a.deg_; ++i) r.c_[i] = ffdetail::mod64(a.c_[i] - b.c_[i], a.ell_);
        return r;
    }
    friend FiniteFieldElem operator*(const FiniteFieldElem& a, const FiniteFieldElem& b) {
        a.check_same(b);
        ffdetail::Poly pa(a.c_.begin(), a.c_.begin() + a.deg_);
        ffdetail::Poly pb(b.c_.begin(), b.c_.begin() + b.deg_);
        ffdetail::Poly pr = ffdetail::poly_rem(ffdetail::poly_mul(pa, pb, a.ell_),
                                               ffdetail::canonical_modulus(a.ell_, a.deg_), a.ell_);
        pr.resize(a.deg_, 0);
        return FiniteFieldElem(a.ell_, a.deg_, std::vector<std::int64_t>(pr.begin(), pr.end()));
    }

    FiniteFieldElem pow(Int e) const {
        if (is_zero()) {
            if (e == 0) return one(ell_, deg_);
            if (e < 0) throw domain_error("negative power of zero field element");
            return *this;
        }
        std::int64_t order = 1;
        for (int i = 0; i < deg_; ++i) order *= ell_;
        --order;  // multiplicative order of the unit group
        e = mod_positive(e, Int(order));
        FiniteFieldElem r = one(ell_, deg_), b = *this;
        Int k = e;
        while (k > 0) {
            if (k % 2 == 1) r = r * b;
            b = b * b;
            k /= 2;
        }
        return r;
    }

    FiniteFieldElem inverse() const {
        if (is_zero()) throw domain_error("inverse of zero field element");
        std::int64_t order = 1;
        for (int i = 0; i < deg_; ++i) order *= ell_;
        return pow(Int(order - 2));
    }

    FiniteFieldElem frobenius() const { return pow(Int(ell_)); }

    friend bool operator==(const FiniteFieldElem& a, const FiniteFieldElem& b) {
        return a.ell_ == b.ell_ && a.deg_ == b.deg_ && a.c_ == b.c_;
    }
    friend bool operator!=(const FiniteFieldElem& a, const FiniteFieldElem& b) {
        return !(a == b);
    }
    // Coefficient-vector lexicographic order (used to canonicalize multisets).
    friend bool operator<(const FiniteFieldElem& a, const FiniteFieldElem& b) {
        if (a.ell_ != b.ell_) return a.ell_ < b.ell_;
        if (a.deg_ != b.deg_) return a.deg_ < b.deg_;
        return a.c_ < b.c_;
    }

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < deg_; ++i) s += (i ? "," : "") + std::to_string(c_[i]);
        return s + "]";
    }

private:
    static int ell_adic_valuation_or_zero(const Rational& x, std::int64_t ell) {
        if (x == 0) return 0;
        return ell_adic_valuation(x, Int(ell));
    }
    void check_same(const FiniteFieldElem& o) const {
        if (ell_ != o.ell_ || deg_ != o.deg_)
            throw domain_error("finite field arithmetic across different fields");
    }

    std::int64_t ell_ = 2;
    int deg_ = 1;
    std::array<std::int64_t, 4> c_{};
};

// Fixes the image of the formal q^{1/2} in the residue field over ell, so
// that reductions of coefficient-ring elements are deterministic.
struct ReductionContext {
    std::int64_t ell = 0;
    std::int64_t q = 0;
    FiniteFieldElem sqrt_q_image;  // s with s^2 = image of q

    int degree() const { return sqrt_q_image.degree(); }
};

// Deterministic context: the smaller integer square root when q is a square
// mod ell, otherwise the lexicographically smaller root of x^2 - q in the
// canonical degree-2 model.
inline ReductionContext build_reduction_context(std::int64_t ell, std::int64_t q) {
    if (!is_prime(Int(ell))) throw domain_error("ell must be prime");
    if (q < 2) throw domain_error("q must be a prime power");
    if (q % ell == 0) throw domain_error("ell must not divide q");

    std::int64_t qm = ffdetail::mod64(q, ell);
    for (std::int64_t r = 0; r <= ell / 2; ++r)
        if (ffdetail::mod64(r * r - qm, ell) == 0)
            return ReductionContext{ell, q, FiniteFieldElem(ell, 1, {r})};

    // q is not a square mod ell; find both roots in the canonical F_{ell^2}
    // and keep the lexicographically smaller one.
    FiniteFieldElem target = FiniteFieldElem::from_integer(ell, 2, Int(q));
    const ffdetail::Poly& m = ffdetail::canonical_modulus(ell, 2);
    std::int64_t a = m[1], b = m[0];
    // Write a root as u + v t with t the class of x: t^2 = -a t - b.  Then
    // v (2u - a v) = 0 forces 2u = a v (v = 0 would make q a square mod ell),
    // and v^2 (a^2 - 4 b) = 4 q.
    std::int64_t rhs = ffdetail::mod64(
        4 * qm % ell * ffdetail::inv_mod(ffdetail::mod64(a * a - 4 * b, ell), ell), ell);
    for (std::int64_t v = 1; v < ell; ++v) {
        if (ffdetail::mod64(v * v - rhs, ell) != 0) continue;
        std::int64_t u = ffdetail::mod64(a * v * ffdetail::inv_mod(2, ell), ell);
        FiniteFieldElem s(ell, 2, {u, v});
        if (s * s == target) {
            FiniteFieldElem neg = FiniteFieldElem::zero(ell, 2) - s;
            return ReductionContext{ell, q, s < neg ? s : neg};
        }
    }
    throw domain_error("no square root of q found in the degree-2 extension");
}

// Ring homomorphism sending q^{1/2} to the context's fixed image and every
// coefficient to its residue.
inline FiniteFieldElem reduce_coeff(const CoeffElem& x, const ReductionContext& ctx) {
    if (x.base_q() != 0 && x.base_q() != ctx.q)
        throw context_mismatch_error("element has base q = " + std::to_string(x.base_q()) +
                                     ", context has q = " + std::to_string(ctx.q));
    int deg = ctx.degree();
    FiniteFieldElem acc = FiniteFieldElem::zero(ctx.ell, deg);
    for (const auto& [k, c] : x.terms()) {
        if (ell_adic_valuation(c, Int(ctx.ell)) < 0)
            throw not_integral_error("coefficient " + format_rational(c) +
                                     " is not integral at " + std::to_string(ctx.ell));
        FiniteFieldElem img = FiniteFieldElem::from_rational(ctx.ell, deg, c);
        acc = acc + img * ctx.sqrt_q_image.pow(Int(k));
    }
    return acc;
}

}  // namespace modl
