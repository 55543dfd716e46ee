#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "modl/coeff.hpp"
#include "modl/error.hpp"
#include "modl/rational.hpp"

namespace modl {

namespace rfdetail {

// Dense polynomial in the formal symbol z = q^{1/2} over Q; a[i] is the
// coefficient of z^i, no trailing zeros.
using QPoly = std::vector<Rational>;

inline void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline QPoly mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline QPoly rem(QPoly a, const QPoly& b) {
    trim(a);
    while (a.size() >= b.size()) {
        Rational f = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i + 1 < b.size(); ++i) a[off + i] -= f * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

inline QPoly div_exact(const QPoly& a, const QPoly& b) {
    QPoly r = a, q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
    trim(r);
    while (r.size() >= b.size()) {
        Rational f = r.back() / b.back();
        q[r.size() - b.size()] = f;
        std::size_t off = r.size() - b.size();
        for (std::size_t i = 0; i + 1 < b.size(); ++i) r[off + i] -= f * b[i];
        r.pop_back();
        trim(r);
    }
    if (!r.empty()) throw domain_error("inexact polynomial division");
    return q;
}

inline QPoly gcd(QPoly a, QPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (Rational& c : a) c /= lead;
    }
    return a;
}

// x = z^shift * P(z) with P(0) != 0 (x nonzero).
inline std::pair<int, QPoly> decompose(const CoeffElem& x) {
    if (x.is_zero()) return {0, {}};
    int lo = x.terms().begin()->first;
    int hi = x.terms().rbegin()->first;
    QPoly p(hi - lo + 1, Rational(0));
    for (const auto& [k, c] : x.terms()) p[k - lo] = c;
    return {lo, p};
}

inline CoeffElem rebuild(std::int64_t base, int shift, const QPoly& p) {
    std::map<int, Rational> t;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != 0) t[shift + static_cast<int>(i)] = p[i];
    return CoeffElem(base, std::move(t));
}

}  // namespace rfdetail

// Fraction field of the coefficient ring.  Canonical form: num is a Laurent
// element, den is a monic ordinary polynomial in the formal q^{1/2} with
// nonzero constant term, coprime to the polynomial part of num.
class RatFun {
public:
    RatFun() = default;
    explicit RatFun(const Rational& c) : num_(c) {}
    explicit RatFun(const CoeffElem& n) : num_(n) {}
    RatFun(const CoeffElem& n, const CoeffElem& d) { normalize(n, d); }

    const CoeffElem& num() const { return num_; }
    const CoeffElem& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_ == CoeffElem::one(); }

    CoeffElem to_coeff() const {
        if (!is_laurent()) throw domain_error("denominator is not a unit: " + str());
        return num_;
    }

    RatFun inverse() const {
        if (is_zero()) throw domain_error("inverse of zero");
        return RatFun(den_, num_);
    }

    RatFun operator-() const {
        RatFun r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFun operator/(const RatFun& a, const RatFun& b) { return a * b.inverse(); }
    friend RatFun operator*(const Rational& c, const RatFun& a) {
        return RatFun(c * a.num_, a.den_);
    }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

    std::string str() const {
        if (is_laurent()) return num_.str();
        return "(" + num_.str() + ") / (" + den_.str() + ")";
    }

private:
    void normalize(const CoeffElem& n, const CoeffElem& d) {
        if (d.is_zero()) throw domain_error("division by zero coefficient element");
        if (n.base_q() != 0 && d.base_q() != 0 && n.base_q() != d.base_q())
            throw domain_error("mixed base q in fraction arithmetic");
        std::int64_t base = n.base_q() != 0 ? n.base_q() : d.base_q();
        if (n.is_zero()) {
            num_ = CoeffElem();
            den_ = CoeffElem::one();
            return;
        }
        auto [sn, p0] = rfdetail::decompose(n);
        auto [sd, q0] = rfdetail::decompose(d);
        rfdetail::QPoly g = rfdetail::gcd(p0, q0);
        rfdetail::QPoly p = rfdetail::div_exact(p0, g);
        rfdetail::QPoly q = rfdetail::div_exact(q0, g);
        Rational lead = q.back();
        for (Rational& c : p) c /= lead;
        for (Rational& c : q) c /= lead;
        num_ = rfdetail::rebuild(base, sn - sd, p);
        den_ = rfdetail::rebuild(base, 0, q);
    }

    CoeffElem num_;
    CoeffElem den_ = CoeffElem::one();
};

}  // namespace modl
