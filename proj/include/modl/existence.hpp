#pragma once

#include <string>

#include "modl/quadform.hpp"

namespace modl {

struct ExistenceDecision {
    bool exists = false;
    std::string reason;
};

// Whether a special orthogonal / unitary group of the given kind over a
// totally real field of degree r admits a form that is compact at every real
// place and quasi-split at every finite place.  Parity criteria:
//   odd:        r n(n+1)/2 even
//   even:       n odd, or delta not in the class of (-1)^n, or r n(n-1)/2 even
//   hermitian:  n odd, or (n even and r n/2 even)
// For the even orthogonal case the caller supplies whether the intended
// global discriminant equals (-1)^n up to squares.
inline ExistenceDecision exists_definite_quasisplit(FormKind kind, int r, int n,
                                                    bool delta_is_minus_one_pow_n = true) {
    if (r < 1) throw domain_error("field degree must be positive");
    if (n < 1) throw domain_error("rank must be positive");
    switch (kind) {
        case FormKind::odd_orthogonal: {
            long long e = static_cast<long long>(r) * n * (n + 1) / 2;
            if (e % 2 == 0) return {true, "r*n(n+1)/2 = " + std::to_string(e) + " is even"};
            return {false, "r*n(n+1)/2 = " + std::to_string(e) + " is odd"};
        }
        case FormKind::even_orthogonal: {
            if (n % 2 != 0) return {true, "n = " + std::to_string(n) + " is odd"};
            if (!delta_is_minus_one_pow_n)
                return {true, "discriminant differs from (-1)^n, the sign is adjustable"};
            long long e = static_cast<long long>(r) * n * (n - 1) / 2;
            if (e % 2 == 0) return {true, "r*n(n-1)/2 = " + std::to_string(e) + " is even"};
            return {false, "n even, discriminant (-1)^n, and r*n(n-1)/2 = " +
                               std::to_string(e) + " is odd"};
        }
        case FormKind::hermitian: {
            if (n % 2 != 0) return {true, "n = " + std::to_string(n) + " is odd"};
            long long e = static_cast<long long>(r) * n / 2;
            if (e % 2 == 0) return {true, "n and r*n/2 = " + std::to_string(e) + " are both even"};
            return {false, "n even but r*n/2 = " + std::to_string(e) + " is odd"};
        }
    }
    throw domain_error("unknown form kind");
}

}  // namespace modl
