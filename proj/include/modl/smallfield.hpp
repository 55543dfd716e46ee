#pragma once

#include <cstdint>
#include <vector>

#include "modl/error.hpp"
#include "modl/rational.hpp"

namespace modl {

// Residue-field arithmetic for small cardinalities, with elements encoded as
// base-p digit packs of their coordinate vectors.  Multiplication runs through
// discrete-log tables for a fixed generator; the defining polynomial is the
// first monic one (by digit-pack order) for which x is primitive, so element
// codes are stable across runs and platforms.
//
// Codes: 0 is zero, 1 is one, and for degree >= 2 the code p is the generator.
class SmallField {
public:
    SmallField(std::int64_t p, int degree) : p_(p), d_(degree) {
        if (!is_prime(Int(p))) throw domain_error("field characteristic must be prime");
        if (degree < 1) throw domain_error("field degree must be positive");
        q_ = 1;
        for (int i = 0; i < degree; ++i) {
            q_ *= p;
            if (q_ > (1 << 16)) throw domain_error("field too large for table-based arithmetic");
        }
        build_tables();
    }

    static SmallField of_order(std::int64_t q) {
        if (q < 2) throw domain_error("field order must be at least 2");
        std::int64_t p = 2;
        while (q % p != 0) {
            ++p;
            if (p * p > q) p = q;
        }
        int d = 0;
        std::int64_t m = q;
        while (m % p == 0) {
            m /= p;
            ++d;
        }
        if (m != 1) throw domain_error("field order must be a prime power");
        return SmallField(p, d);
    }

    std::int64_t q() const { return q_; }
    std::int64_t p() const { return p_; }
    int degree() const { return d_; }

    int zero() const { return 0; }
    int one() const { return 1; }
    int generator() const { return q_ == 2 ? 1 : pw_[1]; }

    int add(int a, int b) const {
        check(a);
        check(b);
        int r = 0, scale = 1;
        for (int i = 0; i < d_; ++i) {
            r += static_cast<int>((a % p_ + b % p_) % p_) * scale;
            a /= static_cast<int>(p_);
            b /= static_cast<int>(p_);
            scale *= static_cast<int>(p_);
        }
        return r;
    }

    int neg(int a) const {
        check(a);
        int r = 0, scale = 1;
        for (int i = 0; i < d_; ++i) {
            r += static_cast<int>((p_ - a % p_) % p_) * scale;
            a /= static_cast<int>(p_);
            scale *= static_cast<int>(p_);
        }
        return r;
    }

    int sub(int a, int b) const { return add(a, neg(b)); }

    int mul(int a, int b) const {
        check(a);
        check(b);
        if (a == 0 || b == 0) return 0;
        return pw_[(lg_[a] + lg_[b]) % (q_ - 1)];
    }

    int inv(int a) const {
        check(a);
        if (a == 0) throw domain_error("inverse of zero field element");
        return pw_[(q_ - 1 - lg_[a]) % (q_ - 1)];
    }

    int pow(int a, std::int64_t e) const {
        check(a);
        if (a == 0) {
            if (e > 0) return 0;
            if (e == 0) return 1;
            throw domain_error("negative power of zero field element");
        }
        std::int64_t r = (lg_[a] * (e % (q_ - 1))) % (q_ - 1);
        if (r < 0) r += q_ - 1;
        return pw_[r];
    }

    int frobenius(int a) const { return pow(a, p_); }

    // Absolute trace down to the prime field, returned as a value in [0, p).
    int trace(int a) const {
        check(a);
        int acc = 0, x = a;
        for (int i = 0; i < d_; ++i) {
            acc = add(acc, x);
            x = frobenius(x);
        }
        return acc;
    }

    int from_log(std::int64_t e) const {
        std::int64_t r = e % (q_ - 1);
        if (r < 0) r += q_ - 1;
        return pw_[r];
    }

    std::int64_t log_of(int a) const {
        check(a);
        if (a == 0) throw domain_error("logarithm of zero field element");
        return lg_[a];
    }

    // Membership in the subfield of order p^sub_degree.
    bool in_subfield(int a, int sub_degree) const {
        if (sub_degree < 1 || d_ % sub_degree != 0)
            throw domain_error("subfield degree must divide the field degree");
        if (a == 0) return true;
        std::int64_t sub_q = 1;
        for (int i = 0; i < sub_degree; ++i) sub_q *= p_;
        return lg_[a] % ((q_ - 1) / (sub_q - 1)) == 0;
    }

    // Coefficients (ascending, as digit-pack codes) of the chosen defining
    // polynomial x^d + c_{d-1} x^{d-1} + ... + c_0.
    const std::vector<int>& defining_coefficients() const { return def_; }

private:
    void check(int a) const {
        if (a < 0 || a >= q_) throw domain_error("field element code out of range");
    }

    void build_tables() {
        int q = static_cast<int>(q_), p = static_cast<int>(p_);
        std::vector<int> codes(q - 1);
        for (int enc = 0; enc < q; ++enc) {
            // f = x^d + sum c_i x^i with digits of enc as c_i
            std::vector<int> c(d_);
            int e = enc;
            for (int i = 0; i < d_; ++i) {
                c[i] = e % p;
                e /= p;
            }
            std::vector<int> cur(d_, 0);
            cur[0] = 1;
            bool primitive = false;
            for (int k = 1; k <= q - 1; ++k) {
                // multiply by x and reduce: x^d = -(c_{d-1} x^{d-1} + ... + c_0)
                int top = cur[d_ - 1];
                for (int i = d_ - 1; i > 0; --i) cur[i] = (cur[i - 1] + (p - top % p) * c[i]) % p;
                cur[0] = ((p - top % p) * c[0]) % p;
                int code = 0;
                for (int i = d_ - 1; i >= 0; --i) code = code * p + cur[i];
                bool is_one = code == 1;
                if (k < q - 1) {
                    if (is_one) break;
                    codes[k] = code;
                } else if (is_one) {
                    primitive = true;
                }
            }
            if (!primitive) continue;
            codes[0] = 1;
            pw_ = codes;
            lg_.assign(q, 0);
            for (int k = 0; k < q - 1; ++k) lg_[pw_[k]] = k;
            def_ = c;
            return;
        }
        throw domain_error("no primitive defining polynomial found");
    }

    std::int64_t p_ = 2, q_ = 2;
    int d_ = 1;
    std::vector<int> pw_, lg_;
    std::vector<int> def_;
};

}  // namespace modl
