#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "modl/error.hpp"
#include "modl/rational.hpp"

namespace modl {

namespace cycdetail {

using ZPoly = std::vector<Int>;  // ascending coefficients

inline void trim(ZPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

// Remainder by a monic divisor, exact over the integers.
inline ZPoly rem(ZPoly a, const ZPoly& b) {
    trim(a);
    while (a.size() >= b.size()) {
        Int f = a.back();
        std::size_t off = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        trim(a);
    }
    return a;
}

inline ZPoly div_exact(ZPoly a, const ZPoly& b) {
    trim(a);
    if (a.empty()) return {};
    ZPoly q(a.size() - b.size() + 1);
    while (a.size() >= b.size()) {
        Int f = a.back();
        std::size_t off = a.size() - b.size();
        q[off] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
        trim(a);
    }
    if (!a.empty()) throw domain_error("inexact cyclotomic division");
    return q;
}

// Phi_M, cached; computed as (X^M - 1) / prod of the proper-divisor factors.
inline const ZPoly& cyclotomic_poly(std::int64_t M) {
    static std::map<std::int64_t, ZPoly> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    if (M < 1 || M > 4096) throw domain_error("cyclotomic modulus out of range");
    std::vector<std::int64_t> stack{M};
    while (!stack.empty()) {
        std::int64_t m = stack.back();
        if (cache.count(m)) {
            stack.pop_back();
            continue;
        }
        bool ready = true;
        for (std::int64_t d = 1; d < m; ++d)
            if (m % d == 0 && !cache.count(d)) {
                stack.push_back(d);
                ready = false;
            }
        if (!ready) continue;
        stack.pop_back();
        ZPoly num(m + 1);
        num[0] = -1;
        num[m] = 1;
        for (std::int64_t d = 1; d < m; ++d)
            if (m % d == 0) num = div_exact(num, cache.at(d));
        cache.emplace(m, std::move(num));
    }
    return cache.at(M);
}

}  // namespace cycdetail

// Exact element of Z[zeta_M], stored as the canonical residue mod Phi_M.
class CycSum {
public:
    explicit CycSum(std::int64_t M, const Int& constant = Int(0)) : m_(M) {
        c_.assign(degree(M), Int(0));
        if (constant != 0) {
            cycdetail::ZPoly p{constant};
            reduce(p);
        }
    }

    static CycSum root_of_unity(std::int64_t M, const Int& k) {
        CycSum r(M);
        Int e = mod_positive(k, Int(M));
        cycdetail::ZPoly p(static_cast<std::size_t>(e) + 1);
        p.back() = 1;
        r.reduce(p);
        return r;
    }

    std::int64_t modulus() const { return m_; }
    const std::vector<Int>& coefficients() const { return c_; }

    bool is_zero() const {
        for (const Int& x : c_)
            if (x != 0) return false;
        return true;
    }

    bool is_integer() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    Int as_integer() const {
        if (!is_integer()) throw domain_error("cyclotomic sum is not an integer");
        return c_.empty() ? Int(0) : c_[0];
    }

    // Complex conjugation, zeta -> zeta^{-1}.
    CycSum conj() const {
        CycSum r(m_);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0)
                r = r + c_[i] * root_of_unity(m_, -Int(static_cast<std::int64_t>(i)));
        return r;
    }

    // Rewrite over a larger root of unity, zeta_M = zeta_M2^{M2/M}.
    CycSum embed_into(std::int64_t m2) const {
        if (m2 % m_ != 0) throw context_mismatch_error("cyclotomic modulus does not extend");
        CycSum r(m2);
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0)
                r = r + c_[i] * root_of_unity(m2, Int(static_cast<std::int64_t>(i) * (m2 / m_)));
        return r;
    }

    CycSum operator-() const {
        CycSum r = *this;
        for (Int& x : r.c_) x = -x;
        return r;
    }

    friend CycSum operator+(const CycSum& a, const CycSum& b) {
        a.match(b);
        CycSum r = a;
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
        return r;
    }

    friend CycSum operator-(const CycSum& a, const CycSum& b) { return a + (-b); }

    friend CycSum operator*(const CycSum& a, const CycSum& b) {
        a.match(b);
        CycSum r(a.m_);
        cycdetail::ZPoly p = cycdetail::mul(a.c_, b.c_);
        r.reduce(p);
        return r;
    }

    friend CycSum operator*(const Int& k, const CycSum& a) {
        CycSum r = a;
        for (Int& x : r.c_) x *= k;
        return r;
    }

    friend bool operator==(const CycSum& a, const CycSum& b) {
        return a.m_ == b.m_ && a.c_ == b.c_;
    }
    friend bool operator!=(const CycSum& a, const CycSum& b) { return !(a == b); }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += c_[i] > 0 ? " + " : " - ";
            else if (c_[i] < 0) s += "-";
            Int a = abs_int(c_[i]);
            if (i == 0) {
                s += format_int(a);
            } else {
                if (a != 1) s += format_int(a) + "*";
                s += "z" + std::to_string(m_);
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? "0" : s;
    }

private:
    static std::size_t degree(std::int64_t M) { return cycdetail::cyclotomic_poly(M).size() - 1; }

    void match(const CycSum& o) const {
        if (m_ != o.m_) throw context_mismatch_error("mixed cyclotomic moduli");
    }

    void reduce(cycdetail::ZPoly& p) {
        cycdetail::ZPoly r = cycdetail::rem(std::move(p), cycdetail::cyclotomic_poly(m_));
        c_.assign(degree(m_), Int(0));
        for (std::size_t i = 0; i < r.size(); ++i) c_[i] = r[i];
    }

    std::int64_t m_;
    std::vector<Int> c_;
};

}  // namespace modl
