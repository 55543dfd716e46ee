#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modl/hilbert.hpp"

namespace modl {

enum class FormKind { odd_orthogonal, even_orthogonal, hermitian };

inline std::string form_kind_name(FormKind k) {
    switch (k) {
        case FormKind::odd_orthogonal: return "odd";
        case FormKind::even_orthogonal: return "even";
        case FormKind::hermitian: return "hermitian";
    }
    throw domain_error("unknown form kind");
}

inline FormKind parse_form_kind(const std::string& s) {
    if (s == "odd") return FormKind::odd_orthogonal;
    if (s == "even") return FormKind::even_orthogonal;
    if (s == "hermitian") return FormKind::hermitian;
    throw domain_error("unknown form kind: " + s);
}

// lambda_1 x_1^2 + ... + lambda_d x_d^2 with all coefficients nonzero.
struct DiagQuadForm {
    std::vector<Rational> coeffs;

    DiagQuadForm() = default;
    explicit DiagQuadForm(std::vector<Rational> cs) : coeffs(std::move(cs)) {
        if (coeffs.empty()) throw domain_error("a diagonal form needs at least one coefficient");
        for (const Rational& c : coeffs)
            if (c == 0) throw domain_error("diagonal coefficients must be nonzero");
    }

    int dim() const { return static_cast<int>(coeffs.size()); }
    Rational disc() const {
        Rational d(1);
        for (const Rational& c : coeffs) d *= c;
        return d;
    }
};

// lambda_1 N(x_1) + ... + lambda_n N(x_n) over the quadratic algebra k(sqrt(alpha)).
struct HermitianDatum {
    Rational alpha;
    std::vector<Rational> coeffs;

    HermitianDatum(const Rational& a, std::vector<Rational> cs) : alpha(a), coeffs(std::move(cs)) {
        if (alpha == 0) throw domain_error("quadratic algebra parameter must be nonzero");
        if (coeffs.empty()) throw domain_error("a hermitian form needs at least one coefficient");
        for (const Rational& c : coeffs)
            if (c == 0) throw domain_error("hermitian coefficients must be nonzero");
    }

    int n() const { return static_cast<int>(coeffs.size()); }
    Rational disc() const {
        Rational d(1);
        for (const Rational& c : coeffs) d *= c;
        return d;
    }
};

struct LocalProfile {
    Place place = Place::real();
    int dim = 0;
    Rational disc_rep = Rational(1);
    int hasse = 1;
    std::optional<std::pair<int, int>> signature;  // (positives, negatives), real place only
};

inline LocalProfile local_profile(const DiagQuadForm& f, const Place& v) {
    LocalProfile out;
    out.place = v;
    out.dim = f.dim();
    out.disc_rep = f.disc();
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        for (std::size_t j = i + 1; j < f.coeffs.size(); ++j)
            out.hasse *= hilbert_symbol(f.coeffs[i], f.coeffs[j], v);
    if (v.is_real()) {
        int pos = 0, neg = 0;
        for (const Rational& c : f.coeffs) (c > 0 ? pos : neg)++;
        out.signature = std::make_pair(pos, neg);
    }
    return out;
}

inline bool locally_equivalent(const DiagQuadForm& f, const DiagQuadForm& g, const Place& v) {
    if (f.dim() != g.dim()) return false;
    LocalProfile pf = local_profile(f, v), pg = local_profile(g, v);
    if (v.is_real()) return pf.signature == pg.signature;
    return pf.hasse == pg.hasse && same_square_class(pf.disc_rep, pg.disc_rep, v);
}

// Places where some pairwise symbol or the discriminant class could be
// nontrivial; everywhere else local equivalence is automatic.
inline std::vector<Place> symbol_support(const DiagQuadForm& f) {
    std::set<Int> primes{Int(2)};
    for (const Rational& c : f.coeffs)
        for (const Int& p : prime_support(c)) primes.insert(p);
    std::vector<Place> out{Place::real()};
    for (const Int& p : primes) out.push_back(Place::finite(p));
    return out;
}

inline bool globally_equivalent(const DiagQuadForm& f, const DiagQuadForm& g) {
    if (f.dim() != g.dim()) return false;
    std::set<Int> primes;
    for (const DiagQuadForm* h : {&f, &g})
        for (const Place& v : symbol_support(*h))
            if (v.is_finite()) primes.insert(v.prime());
    if (!locally_equivalent(f, g, Place::real())) return false;
    for (const Int& p : primes)
        if (!locally_equivalent(f, g, Place::finite(p))) return false;
    return true;
}

// Hasse invariant of the form underlying the quasi-split special orthogonal
// group: dimension 2n+1 with discriminant class delta in the odd case, the
// sum of n hyperbolic planes in the even case.
inline int split_so_hasse(FormKind parity, int n, const Rational& delta, const Place& v) {
    if (n < 1) throw domain_error("rank parameter must be positive");
    if (delta == 0) throw domain_error("discriminant must be nonzero");
    if (!v.is_finite()) throw domain_error("split form invariant is taken at finite places");
    Rational minus_one(-1);
    switch (parity) {
        case FormKind::odd_orthogonal: {
            int e = (n * (n + 1) / 2) % 2;
            int h = e ? hilbert_symbol(minus_one, minus_one, v) : 1;
            if (n % 2 != 0) h *= hilbert_symbol(minus_one, delta, v);
            return h;
        }
        case FormKind::even_orthogonal: {
            int e = (n * (n - 1) / 2) % 2;
            return e ? hilbert_symbol(minus_one, minus_one, v) : 1;
        }
        case FormKind::hermitian: break;
    }
    throw domain_error("split form invariant applies to orthogonal kinds");
}

// Hasse invariant of the trace form of a rank-n hermitian form over
// k(sqrt(alpha)) with discriminant delta: (alpha,delta) (-alpha,-1)^{n(n-1)/2}.
inline int hermitian_trace_hasse(int n, const Rational& alpha, const Rational& delta,
                                 const Place& v) {
    if (n < 1) throw domain_error("rank must be positive");
    if (alpha == 0 || delta == 0) throw domain_error("alpha and delta must be nonzero");
    int h = hilbert_symbol(alpha, delta, v);
    if ((n * (n - 1) / 2) % 2 != 0) h *= hilbert_symbol(-alpha, Rational(-1), v);
    return h;
}

enum class SOClass { split, non_quasi_split, quasi_split_nonsplit, so2_split_torus };

inline std::string so_class_name(SOClass c) {
    switch (c) {
        case SOClass::split: return "split";
        case SOClass::non_quasi_split: return "non-quasi-split";
        case SOClass::quasi_split_nonsplit: return "quasi-split-nonsplit";
        case SOClass::so2_split_torus: return "so2-split-torus";
    }
    throw domain_error("unknown classification");
}

struct SOClassification {
    SOClass kind = SOClass::split;
    FormKind parity = FormKind::odd_orthogonal;
    int n = 0;                    // dim = 2n+1 or 2n
    Rational alpha = Rational(1); // even case: normalized discriminant (-1)^n delta
};

inline SOClassification classify_so_local(const DiagQuadForm& f, const Place& v) {
    if (f.dim() < 2) throw domain_error("classification needs dimension at least 2");
    if (!v.is_finite()) throw domain_error("classification is at finite places");
    LocalProfile p = local_profile(f, v);
    SOClassification out;
    if (f.dim() % 2 != 0) {
        out.parity = FormKind::odd_orthogonal;
        out.n = (f.dim() - 1) / 2;
        out.alpha = p.disc_rep;
        int qs = split_so_hasse(FormKind::odd_orthogonal, out.n, p.disc_rep, v);
        out.kind = (p.hasse == qs) ? SOClass::split : SOClass::non_quasi_split;
        return out;
    }
    out.parity = FormKind::even_orthogonal;
    out.n = f.dim() / 2;
    Rational alpha = (out.n % 2 != 0 ? Rational(-1) : Rational(1)) * p.disc_rep;
    out.alpha = Rational(squarefree_class(alpha));
    if (!is_local_square(alpha, v)) {
        // both Hasse classes give the same quasi-split, non-split group
        out.kind = SOClass::quasi_split_nonsplit;
        return out;
    }
    if (out.n == 1) {
        // hyperbolic plane: SO_2 is the split one-dimensional torus
        out.kind = SOClass::so2_split_torus;
        return out;
    }
    int qs = split_so_hasse(FormKind::even_orthogonal, out.n, p.disc_rep, v);
    out.kind = (p.hasse == qs) ? SOClass::split : SOClass::non_quasi_split;
    return out;
}

}  // namespace modl
