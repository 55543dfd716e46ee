#pragma once

#include <string>

#include "modl/error.hpp"
#include "modl/rational.hpp"

namespace modl {

// A place of Q: the real place or a finite prime.
class Place {
public:
    static Place real() { return Place(Int(0)); }
    static Place finite(const Int& p) {
        if (!is_prime(p)) throw domain_error("finite place needs a prime, got " + p.str());
        return Place(p);
    }

    bool is_real() const { return p_ == 0; }
    bool is_finite() const { return p_ != 0; }
    const Int& prime() const {
        if (is_real()) throw domain_error("real place has no prime");
        return p_;
    }

    std::string str() const { return is_real() ? "inf" : p_.str(); }

    static Place parse(const std::string& s) {
        if (s == "inf" || s == "oo" || s == "real") return real();
        return finite(parse_int(s));
    }

    friend bool operator==(const Place& a, const Place& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Place& a, const Place& b) { return a.p_ != b.p_; }
    // Real place sorts first, then finite places by prime.
    friend bool operator<(const Place& a, const Place& b) { return a.p_ < b.p_; }

private:
    explicit Place(Int p) : p_(std::move(p)) {}
    Int p_;  // 0 encodes the real place
};

}  // namespace modl
