#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "modl/certificate.hpp"
#include "modl/existence.hpp"

namespace modl {

struct ObstructionReport {
    int minimal_r = 2;  // smallest even field degree clearing the parity
    std::string reason;
};

using GlobalizeResult = std::variant<GlobalCertificate, ObstructionReport>;

namespace gdetail {

// Drop +1 entries (they are implicit outside the support) except at the
// anchor, then rebuild the support from what remains.
inline void trim_trivial_signs(GlobalCertificate& c, const Int& anchor) {
    for (auto it = c.finite_data.begin(); it != c.finite_data.end();)
        it = (it->second == 1 && it->first != anchor) ? c.finite_data.erase(it) : std::next(it);
    c.support.clear();
    for (const auto& [p, s] : c.finite_data) c.support.push_back(p);
}

inline Int smallest_nonsquare_prime(const Rational& alpha, const std::set<Int>& excluded) {
    std::int64_t bound = auxiliary_place_bound();
    for (std::int64_t u = 2; u <= bound; u = next_prime(u)) {
        Int up(u);
        if (excluded.count(up)) continue;
        if (!is_local_square(alpha, Place::finite(up))) return up;
    }
    throw no_auxiliary_place_error("no balancing place with the algebra nonsplit up to " +
                                   std::to_string(bound));
}

inline GlobalCertificate verified(GlobalCertificate c) {
    CheckResult chk = certificate_check(c);
    if (!chk.ok) throw domain_error("constructed certificate fails its own check: " + chk.detail);
    return c;
}

}  // namespace gdetail

// Build a family of local invariants over Q that is definite at the real
// place, quasi-split at every finite place, and matches the given profile at
// its place w.  Obstructed parities report the smallest even degree instead.
inline GlobalizeResult globalize_quadratic(const LocalProfile& target,
                                           const Rational& global_disc) {
    if (!target.place.is_finite()) throw domain_error("the prescribed place must be finite");
    if (target.dim < 1) throw domain_error("dimension must be positive");
    if (target.hasse != 1 && target.hasse != -1) throw domain_error("Hasse entry must be a sign");
    if (global_disc <= 0) throw domain_error("global discriminant must be positive");
    const Place& w = target.place;
    if (!same_square_class(global_disc, target.disc_rep, w))
        throw disc_mismatch_error("global discriminant is not in the prescribed class at " +
                                  w.str());

    GlobalCertificate cert;
    cert.dim_or_n = target.dim;
    cert.disc_class = Rational(squarefree_class(global_disc));
    cert.real_data = 0;
    cert.anchored = std::make_pair(w, target);

    std::set<Int> primes{Int(2), w.prime()};
    for (const Int& p : prime_support(cert.disc_class)) primes.insert(p);

    if (target.dim % 2 != 0) {
        cert.kind = CertKind::quadratic_odd;
        int n = (target.dim - 1) / 2;
        if ((n * (n + 1) / 2) % 2 != 0)
            return ObstructionReport{2, "over degree r = 1 the parity r*n(n+1)/2 = " +
                                            std::to_string(n * (n + 1) / 2) + " is odd"};
        for (const Int& p : primes)
            cert.finite_data[p] =
                n == 0 ? 1
                       : split_so_hasse(FormKind::odd_orthogonal, n, cert.disc_class,
                                        Place::finite(p));
        if (cert.finite_data[w.prime()] != target.hasse)
            throw domain_error("the prescribed profile is not quasi-split at " + w.str());
        gdetail::trim_trivial_signs(cert, w.prime());
        return gdetail::verified(cert);
    }

    cert.kind = CertKind::quadratic_even;
    int n = target.dim / 2;
    Rational alpha = (n % 2 != 0 ? Rational(-1) : Rational(1)) * cert.disc_class;
    for (const Int& p : primes)
        cert.finite_data[p] = split_so_hasse(FormKind::even_orthogonal, n, cert.disc_class,
                                             Place::finite(p));

    if (is_rational_square(alpha)) {
        // discriminant in the class of (-1)^n everywhere: signs are all forced
        if ((n * (n - 1) / 2) % 2 != 0)
            return ObstructionReport{2, "discriminant in the class of (-1)^n and r*n(n-1)/2 = " +
                                            std::to_string(n * (n - 1) / 2) + " is odd"};
        if (cert.finite_data[w.prime()] != target.hasse)
            throw domain_error("the prescribed profile is not quasi-split at " + w.str());
        gdetail::trim_trivial_signs(cert, w.prime());
        return gdetail::verified(cert);
    }

    if (is_local_square(alpha, w)) {
        if (cert.finite_data[w.prime()] != target.hasse)
            throw domain_error("the prescribed profile is not quasi-split at " + w.str());
    } else {
        cert.finite_data[w.prime()] = target.hasse;  // both signs are quasi-split here
    }

    int product = 1;
    for (const auto& [p, s] : cert.finite_data) product *= s;
    if (product != 1) {
        if (n % 2 != 0) {
            // flip the orientation at the real place: b = 2n contributes (-1)^n
            cert.real_data = 2 * n;
        } else {
            Int y = gdetail::smallest_nonsquare_prime(alpha, primes);
            cert.finite_data[y] = -1;
        }
    }
    gdetail::trim_trivial_signs(cert, w.prime());
    return gdetail::verified(cert);
}

// Hermitian analogue over an imaginary quadratic algebra Q(sqrt(alpha)):
// definite at the real place, quasi-split at every finite place, with the
// discriminant's norm class prescribed at w for odd n.
inline GlobalizeResult globalize_hermitian(int n, const Rational& alpha_global, const Place& w,
                                           std::optional<int> disc_sign_at_w = std::nullopt) {
    if (n < 1) throw domain_error("rank must be positive");
    if (alpha_global >= 0) throw domain_error("the algebra parameter must be negative");
    if (!w.is_finite()) throw domain_error("the prescribed place must be finite");
    if (disc_sign_at_w && *disc_sign_at_w != 1 && *disc_sign_at_w != -1)
        throw domain_error("prescribed class must be a sign");

    GlobalCertificate cert;
    cert.kind = CertKind::hermitian;
    cert.dim_or_n = n;
    cert.disc_class = Rational(squarefree_class(alpha_global));
    cert.real_data = 0;

    std::set<Int> primes{w.prime()};

    if (n % 2 == 0) {
        if ((n / 2) % 2 != 0)
            return ObstructionReport{
                2, "n even needs r*n/2 even; over r = 1, n/2 = " + std::to_string(n / 2) +
                       " is odd"};
        // quasi-split discriminant class (-1)^{n/2} is a square: all signs +1
        if (disc_sign_at_w && *disc_sign_at_w == -1)
            throw domain_error("even rank forces the trivial class at every finite place");
        cert.finite_data[w.prime()] = 1;
    } else {
        int s_w = disc_sign_at_w.value_or(1);
        if (s_w == -1 && is_local_square(cert.disc_class, w))
            throw domain_error("a non-norm class at " + w.str() +
                               " needs the algebra nonsplit there");
        cert.finite_data[w.prime()] = s_w;
        if (s_w == -1) {
            Int y = gdetail::smallest_nonsquare_prime(cert.disc_class, primes);
            cert.finite_data[y] = -1;
        }
    }

    LocalProfile prescribed;
    prescribed.place = w;
    prescribed.dim = n;
    prescribed.disc_rep = cert.disc_class;
    prescribed.hasse = cert.finite_data[w.prime()];
    cert.anchored = std::make_pair(w, prescribed);
    gdetail::trim_trivial_signs(cert, w.prime());
    return gdetail::verified(cert);
}

// Constructive counterpart of the Hasse principle for the quadratic kinds:
// search diagonal forms whose coefficients are (up to sign) products of
// support primes, and return one matching the certificate everywhere.
inline DiagQuadForm realize_form(const GlobalCertificate& c) {
    CheckResult chk = certificate_check(c);
    if (!chk.ok) throw domain_error("invalid certificate: " + chk.detail);
    if (c.kind == CertKind::hermitian)
        throw domain_error("realization applies to the quadratic kinds");
    if (c.dim_or_n > 6) throw domain_error("realization supports dimension at most 6");

    std::set<Int> prime_set{Int(2)};
    for (const Int& p : c.support) prime_set.insert(p);
    for (const Int& p : prime_support(c.disc_class)) prime_set.insert(p);
    std::vector<Int> primes(prime_set.begin(), prime_set.end());

    std::vector<Place> places;
    std::vector<int> want;
    for (const Int& p : primes) {
        places.push_back(Place::finite(p));
        auto it = c.finite_data.find(p);
        want.push_back(it == c.finite_data.end() ? 1 : it->second);
    }

    // candidate coefficient magnitudes: products of distinct support primes
    std::vector<Int> magnitudes{Int(1)};
    for (const Int& p : primes) {
        std::size_t sz = magnitudes.size();
        for (std::size_t i = 0; i < sz; ++i) magnitudes.push_back(magnitudes[i] * p);
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    std::vector<Rational> pool;
    for (const Int& m : magnitudes) {
        pool.push_back(Rational(m));
        pool.push_back(Rational(-m));
    }

    int neg = c.real_data, pos = c.dim_or_n - neg;
    std::vector<Rational> chosen;
    std::vector<int> eps = want;
    Rational disc = c.disc_class;

    // Peeling one coefficient a off a form of discriminant d multiplies the
    // Hasse sign by (a, a d)_v and divides the discriminant by a.
    auto solve = [&](auto&& self, int remaining, int pos_left, int neg_left) -> bool {
        if (remaining == 1) {
            Rational last = Rational(squarefree_class(disc));
            if (last > 0 && pos_left != 1) return false;
            if (last < 0 && neg_left != 1) return false;
            for (int s : eps)
                if (s != 1) return false;
            chosen.push_back(last);
            return true;
        }
        for (const Rational& a : pool) {
            if (a > 0 && pos_left == 0) continue;
            if (a < 0 && neg_left == 0) continue;
            std::vector<int> saved_eps = eps;
            Rational saved_disc = disc;
            for (std::size_t i = 0; i < places.size(); ++i)
                eps[i] *= hilbert_symbol(a, a * disc, places[i]);
            disc = Rational(squarefree_class(disc / a));
            chosen.push_back(a);
            if (self(self, remaining - 1, pos_left - (a > 0 ? 1 : 0),
                     neg_left - (a < 0 ? 1 : 0)))
                return true;
            chosen.pop_back();
            eps = saved_eps;
            disc = saved_disc;
        }
        return false;
    };

    if (!solve(solve, c.dim_or_n, pos, neg))
        throw search_exhausted_error("no diagonal form over the support realizes the certificate");

    DiagQuadForm f(chosen);
    for (std::size_t i = 0; i < places.size(); ++i) {
        LocalProfile p = local_profile(f, places[i]);
        if (p.hasse != want[i] || !same_square_class(p.disc_rep, c.disc_class, places[i]))
            throw search_exhausted_error("realization failed verification");
    }
    LocalProfile pr = local_profile(f, Place::real());
    if (!(pr.signature && *pr.signature == std::make_pair(pos, neg)))
        throw search_exhausted_error("realization failed the signature check");
    return f;
}

}  // namespace modl
