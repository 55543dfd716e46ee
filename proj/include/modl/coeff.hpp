#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "modl/error.hpp"
#include "modl/rational.hpp"

namespace modl {

// Element of the coefficient ring: a Laurent polynomial in a formal symbol
// standing for q^{1/2}, with rational coefficients.  The integer key k of a
// term means q^{k/2}.  base_q records which residue cardinality the symbol
// refers to; 0 marks a context-free scalar that binds to either side of a
// mixed operation (pure rationals carry no q).
class CoeffElem {
public:
    CoeffElem() = default;
    explicit CoeffElem(const Rational& c) { set_term(0, c); }
    CoeffElem(std::int64_t base_q, std::map<int, Rational> terms) : base_(base_q) {
        for (auto& [k, c] : terms) set_term(k, c);
        check_base(base_q);
    }

    static CoeffElem scalar(const Rational& c) { return CoeffElem(c); }
    // c * q^{k/2}
    static CoeffElem monomial(std::int64_t base_q, int half_exp, const Rational& c) {
        CoeffElem e;
        e.base_ = base_q;
        e.set_term(half_exp, c);
        e.check_base(base_q);
        return e;
    }
    static CoeffElem one() { return CoeffElem(Rational(1)); }

    std::int64_t base_q() const { return base_; }
    const std::map<int, Rational>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_scalar() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first == 0); }
    bool is_monomial() const { return t_.size() == 1; }

    Rational coeff(int half_exp) const {
        auto it = t_.find(half_exp);
        return it == t_.end() ? Rational(0) : it->second;
    }
    int monomial_exp() const {
        require_monomial();
        return t_.begin()->first;
    }
    Rational monomial_coeff() const {
        require_monomial();
        return t_.begin()->second;
    }

    CoeffElem operator-() const {
        CoeffElem r = *this;
        for (auto& [k, c] : r.t_) c = -c;
        return r;
    }

    friend CoeffElem operator+(const CoeffElem& a, const CoeffElem& b) {
        CoeffElem r = a;
        r.bind(b.base_);
        for (const auto& [k, c] : b.t_) r.set_term(k, r.coeff(k) + c);
        return r;
    }
    friend CoeffElem operator-(const CoeffElem& a, const CoeffElem& b) { return a + (-b); }
    friend CoeffElem operator*(const CoeffElem& a, const CoeffElem& b) {
        CoeffElem r;
        r.base_ = joint_base(a.base_, b.base_);
        for (const auto& [ka, ca] : a.t_)
            for (const auto& [kb, cb] : b.t_) r.set_term(ka + kb, r.coeff(ka + kb) + ca * cb);
        return r;
    }
    friend CoeffElem operator*(const Rational& c, const CoeffElem& a) {
        return CoeffElem(c) * a;
    }

    // Only monomials are units in this ring.
    CoeffElem inverse() const {
        require_monomial();
        return monomial(base_, -monomial_exp(), Rational(1) / monomial_coeff());
    }

    CoeffElem pow(int e) const {
        if (e < 0) return inverse().pow(-e);
        CoeffElem r = one();
        r.bind(base_);
        CoeffElem b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    // Minimum ell-adic valuation over the coefficients (the formal symbol is
    // an ell-unit whenever ell does not divide q).
    int min_coeff_valuation(const Int& ell) const {
        if (is_zero()) throw domain_error("valuation of zero element");
        bool first = true;
        int m = 0;
        for (const auto& [k, c] : t_) {
            int v = ell_adic_valuation(c, ell);
            if (first || v < m) m = v;
            first = false;
        }
        return m;
    }

    friend bool operator==(const CoeffElem& a, const CoeffElem& b) {
        if (a.t_ != b.t_) return false;
        return a.base_ == b.base_ || a.base_ == 0 || b.base_ == 0;
    }
    friend bool operator!=(const CoeffElem& a, const CoeffElem& b) { return !(a == b); }

    // Total order used for canonical multiset storage: by lowest half-exponent
    // profile, then coefficients.
    friend bool operator<(const CoeffElem& a, const CoeffElem& b) {
        auto ia = a.t_.begin(), ib = b.t_.begin();
        for (; ia != a.t_.end() && ib != b.t_.end(); ++ia, ++ib) {
            if (ia->first != ib->first) return ia->first < ib->first;
            if (ia->second != ib->second) return ia->second < ib->second;
        }
        return ia == a.t_.end() && ib != b.t_.end();
    }

    std::string str() const {
        if (t_.empty()) return "0";
        std::string s;
        for (const auto& [k, c] : t_) {
            if (!s.empty()) s += " + ";
            s += format_rational(c);
            if (k != 0) s += "*q^(" + std::to_string(k) + "/2)";
        }
        return s;
    }

private:
    void require_monomial() const {
        if (!is_monomial()) throw domain_error("element is not an invertible monomial: " + str());
    }
    void set_term(int k, const Rational& c) {
        if (c == 0)
            t_.erase(k);
        else
            t_[k] = c;
    }
    void check_base(std::int64_t b) const {
        if (b < 0 || b == 1) throw domain_error("base q must be a prime power or 0");
    }
    static std::int64_t joint_base(std::int64_t a, std::int64_t b) {
        if (a == 0) return b;
        if (b == 0) return a;
        if (a != b) throw domain_error("mixed base q in coefficient arithmetic");
        return a;
    }
    void bind(std::int64_t b) { base_ = joint_base(base_, b); }

    std::int64_t base_ = 0;
    std::map<int, Rational> t_;
};

}  // namespace modl
