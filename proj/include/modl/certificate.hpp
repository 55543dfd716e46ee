#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modl/quadform.hpp"

namespace modl {

enum class CertKind { quadratic_odd, quadratic_even, hermitian };

inline std::string cert_kind_name(CertKind k) {
    switch (k) {
        case CertKind::quadratic_odd: return "quadratic-odd";
        case CertKind::quadratic_even: return "quadratic-even";
        case CertKind::hermitian: return "hermitian";
    }
    throw domain_error("unknown certificate kind");
}

inline CertKind parse_cert_kind(const std::string& s) {
    if (s == "quadratic-odd") return CertKind::quadratic_odd;
    if (s == "quadratic-even") return CertKind::quadratic_even;
    if (s == "hermitian") return CertKind::hermitian;
    throw domain_error("unknown certificate kind: " + s);
}

// A finitely supported family of local invariants over Q.  Quadratic kinds
// carry a Hasse sign per support prime, the global discriminant class, and
// the count of negative squares at the real place.  Hermitian certificates
// carry the sign (alpha, delta_v)_v per support prime (+1 means delta_v is a
// norm), the algebra parameter alpha in disc_class, and b at the real place.
struct GlobalCertificate {
    CertKind kind = CertKind::quadratic_odd;
    int dim_or_n = 0;
    Rational disc_class = Rational(1);
    std::vector<Int> support;       // sorted distinct primes
    std::map<Int, int> finite_data; // prime -> sign, one entry per support prime
    int real_data = 0;              // b at the real place
    std::optional<std::pair<Place, LocalProfile>> anchored;
};

struct CheckResult {
    bool ok = true;
    std::string detail;
};

inline CheckResult check_failure(const std::string& why) { return {false, why}; }

inline CheckResult certificate_check(const GlobalCertificate& c) {
    if (c.dim_or_n < 1) return check_failure("dimension must be positive");
    if (c.disc_class == 0) return check_failure("discriminant class must be nonzero");
    bool quadratic = c.kind != CertKind::hermitian;
    if (c.kind == CertKind::quadratic_odd && c.dim_or_n % 2 == 0)
        return check_failure("odd kind with even dimension");
    if (c.kind == CertKind::quadratic_even && c.dim_or_n % 2 != 0)
        return check_failure("even kind with odd dimension");
    if (!quadratic && c.disc_class > 0)
        return check_failure("hermitian data needs a negative (imaginary) algebra parameter");
    if (c.real_data < 0 || c.real_data > c.dim_or_n)
        return check_failure("real slot out of range");

    for (std::size_t i = 0; i < c.support.size(); ++i) {
        if (!is_prime(c.support[i])) return check_failure("support contains a non-prime");
        if (i > 0 && !(c.support[i - 1] < c.support[i]))
            return check_failure("support must be strictly increasing");
    }
    for (const auto& [p, s] : c.finite_data) {
        if (s != 1 && s != -1) return check_failure("signs must be +1 or -1");
        if (std::find(c.support.begin(), c.support.end(), p) == c.support.end())
            return check_failure("sign recorded outside the support");
    }
    for (const Int& p : c.support)
        if (!c.finite_data.count(p))
            return check_failure("support prime " + p.str() + " has no sign");

    int product = 1;
    for (const auto& [p, s] : c.finite_data) product *= s;

    if (quadratic) {
        // discriminant sign at the real place is (-1)^b
        bool disc_neg = c.disc_class < 0;
        if (disc_neg != (c.real_data % 2 != 0))
            return check_failure("discriminant sign inconsistent with the real slot");
        // real Hasse factor (-1)^{b(b-1)/2}
        if ((c.real_data * (c.real_data - 1) / 2) % 2 != 0) product = -product;
        if (product != 1) return check_failure("product over all places is -1, not +1");
        if (c.dim_or_n == 1)
            for (const auto& [p, s] : c.finite_data)
                if (s == -1)
                    return check_failure("one-dimensional forms always have Hasse +1");
        if (c.dim_or_n == 2)
            for (const auto& [p, s] : c.finite_data)
                if (s == -1 && is_local_square(-c.disc_class, Place::finite(p)))
                    return check_failure(
                        "binary form with discriminant -1 cannot have Hasse -1 at " + p.str());
    } else {
        // real factor (alpha, delta_inf) = (-1)^b since alpha < 0
        if (c.real_data % 2 != 0) product = -product;
        if (product != 1) return check_failure("product over all places is -1, not +1");
        for (const auto& [p, s] : c.finite_data)
            if (s == -1 && is_local_square(c.disc_class, Place::finite(p)))
                return check_failure("non-norm class prescribed where the algebra splits, at " +
                                     p.str());
    }

    if (c.anchored) {
        const auto& [w, prof] = *c.anchored;
        if (!w.is_finite()) return check_failure("anchored place must be finite");
        auto it = c.finite_data.find(w.prime());
        if (it == c.finite_data.end()) return check_failure("anchored place not in support");
        if (prof.dim != c.dim_or_n) return check_failure("anchored profile dimension mismatch");
        if (prof.hasse != it->second)
            return check_failure("anchored sign disagrees with the certificate");
        if (quadratic && !same_square_class(prof.disc_rep, c.disc_class, w))
            return check_failure("anchored discriminant class disagrees at the anchor");
    }
    return {true, ""};
}

inline std::int64_t auxiliary_place_bound() {
    if (const char* s = std::getenv("MODL_AUX_PLACE_BOUND")) {
        char* end = nullptr;
        long long v = std::strtoll(s, &end, 10);
        if (end && *end == '\0' && v >= 2) return v;
        throw domain_error("MODL_AUX_PLACE_BOUND must be an integer >= 2");
    }
    return 10000;
}

// Smallest prime outside the support (and the anchor) where the group the
// certificate describes is split: anywhere for odd orthogonal groups, where
// the normalized discriminant is a square for even orthogonal ones, where
// alpha is a square for hermitian data.
inline Place find_auxiliary_split_place(const GlobalCertificate& c) {
    CheckResult chk = certificate_check(c);
    if (!chk.ok) throw domain_error("invalid certificate: " + chk.detail);
    Rational alpha = c.disc_class;
    if (c.kind == CertKind::quadratic_even && (c.dim_or_n / 2) % 2 != 0) alpha = -alpha;
    std::int64_t bound = auxiliary_place_bound();
    for (std::int64_t u = 2; u <= bound; u = next_prime(u)) {
        Int up(u);
        if (std::find(c.support.begin(), c.support.end(), up) != c.support.end()) continue;
        if (c.anchored && c.anchored->first.prime() == up) continue;
        if (c.kind == CertKind::quadratic_odd) return Place::finite(up);
        if (is_local_square(alpha, Place::finite(up))) return Place::finite(up);
    }
    throw search_exhausted_error("no auxiliary split place up to " + std::to_string(bound));
}

}  // namespace modl
