#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modl/coeff.hpp"
#include "modl/error.hpp"
#include "modl/finite_field.hpp"

namespace modl {

enum class GroupKind { sp, so_odd, so_even_square, so_even_nonsquare, u_inert, u_split };

// A quasi-split classical group over a p-adic field with residue cardinality
// q: Sp(2n), SO(2n+1), SO(2n) with square or nonsquare normalized
// discriminant, or U(n) split by an unramified quadratic extension or not.
struct GroupType {
    GroupKind kind = GroupKind::sp;
    int n = 1;
    std::int64_t q = 2;

    GroupType() = default;
    GroupType(GroupKind k, int n_, std::int64_t q_) : kind(k), n(n_), q(q_) {
        if (n < 1) throw domain_error("rank parameter must be positive");
        if (q < 2) throw domain_error("residue cardinality must be at least 2");
        if (q > 1000000000) throw domain_error("residue cardinality out of range");
    }

    // dimension N of the transfer target GL_N
    int transfer_dim() const {
        switch (kind) {
            case GroupKind::sp: return 2 * n + 1;
            case GroupKind::so_odd: return 2 * n;
            case GroupKind::so_even_square:
            case GroupKind::so_even_nonsquare: return 2 * n;
            case GroupKind::u_inert:
            case GroupKind::u_split: return n;
        }
        throw domain_error("unknown group kind");
    }

    // residue degree of the transfer target field over the base
    int residue_degree() const { return kind == GroupKind::u_inert ? 2 : 1; }

    // number of unramified characters indexing a Satake parameter
    int rank() const {
        switch (kind) {
            case GroupKind::sp:
            case GroupKind::so_odd:
            case GroupKind::so_even_square:
            case GroupKind::u_split: return n;
            case GroupKind::so_even_nonsquare: return n - 1;
            case GroupKind::u_inert: return n / 2;
        }
        throw domain_error("unknown group kind");
    }

    // residue cardinality of the transfer target field (characters and
    // eigenvalues carry their formal q^{1/2} over this base)
    std::int64_t target_q() const { return kind == GroupKind::u_inert ? q * q : q; }

    // the (d, e) pair controlling modulus characters and the square-root flip
    std::pair<int, int> de() const {
        switch (kind) {
            case GroupKind::sp: return {2 * n, -1};
            case GroupKind::so_odd: return {2 * n + 1, 1};
            case GroupKind::so_even_square:
            case GroupKind::so_even_nonsquare: return {2 * n, 1};
            case GroupKind::u_inert:
            case GroupKind::u_split: return {n, 0};
        }
        throw domain_error("unknown group kind");
    }

    std::string str() const {
        switch (kind) {
            case GroupKind::sp: return "Sp(" + std::to_string(2 * n) + ")";
            case GroupKind::so_odd: return "SO(" + std::to_string(2 * n + 1) + ")";
            case GroupKind::so_even_square: return "SO(" + std::to_string(2 * n) + ",square)";
            case GroupKind::so_even_nonsquare:
                return "SO(" + std::to_string(2 * n) + ",nonsquare)";
            case GroupKind::u_inert: return "U(" + std::to_string(n) + ",inert)";
            case GroupKind::u_split: return "U(" + std::to_string(n) + ",split)";
        }
        throw domain_error("unknown group kind");
    }

    // Accepts "Sp4", "SO5", "SO4,square", "U3,inert" and the parenthesized
    // forms printed by str(); ':' may replace ','.
    static GroupType parse(const std::string& name, std::int64_t q) {
        std::string s;
        for (char ch : name)
            if (ch == '(' || ch == ')')
                continue;
            else if (ch == ':')
                s += ',';
            else
                s += ch;
        std::string tag;
        auto comma = s.find(',');
        if (comma != std::string::npos) {
            tag = s.substr(comma + 1);
            s = s.substr(0, comma);
        }
        std::size_t i = 0;
        while (i < s.size() && !std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        std::string family = s.substr(0, i);
        if (i == s.size()) throw domain_error("group name needs a dimension: " + name);
        int dim = 0;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw domain_error("malformed group name: " + name);
            dim = dim * 10 + (s[i] - '0');
        }
        if (family == "Sp") {
            if (dim % 2 != 0 || !tag.empty()) throw domain_error("malformed group name: " + name);
            return GroupType(GroupKind::sp, dim / 2, q);
        }
        if (family == "SO") {
            if (dim % 2 != 0) {
                if (!tag.empty()) throw domain_error("malformed group name: " + name);
                return GroupType(GroupKind::so_odd, (dim - 1) / 2, q);
            }
            if (tag == "square") return GroupType(GroupKind::so_even_square, dim / 2, q);
            if (tag == "nonsquare") return GroupType(GroupKind::so_even_nonsquare, dim / 2, q);
            throw domain_error("even orthogonal groups need a square/nonsquare tag: " + name);
        }
        if (family == "U") {
            if (tag == "inert") return GroupType(GroupKind::u_inert, dim, q);
            if (tag == "split") return GroupType(GroupKind::u_split, dim, q);
            throw domain_error("unitary groups need an inert/split tag: " + name);
        }
        throw domain_error("unknown group family: " + name);
    }

    friend bool operator==(const GroupType& a, const GroupType& b) {
        return a.kind == b.kind && a.n == b.n && a.q == b.q;
    }
    friend bool operator!=(const GroupType& a, const GroupType& b) { return !(a == b); }
};

// Value of an unramified character on the uniformizer: an invertible
// monomial in the formal q^{1/2}.
struct UnramifiedCharacter {
    CoeffElem value = CoeffElem::one();

    UnramifiedCharacter() = default;
    explicit UnramifiedCharacter(const CoeffElem& v) : value(v) {
        if (!value.is_monomial())
            throw domain_error("character values on the uniformizer are invertible monomials");
    }

    UnramifiedCharacter inverse() const { return UnramifiedCharacter(value.inverse()); }
    friend bool operator==(const UnramifiedCharacter& a, const UnramifiedCharacter& b) {
        return a.value == b.value;
    }
    friend bool operator!=(const UnramifiedCharacter& a, const UnramifiedCharacter& b) {
        return !(a == b);
    }
};

// Satake data: the W-orbit of an unramified character tuple of the split
// torus, stored as the tuple itself.
struct SatakeParam {
    GroupType group;
    std::vector<UnramifiedCharacter> chars;

    SatakeParam(GroupType g, std::vector<UnramifiedCharacter> cs)
        : group(g), chars(std::move(cs)) {
        if (static_cast<int>(chars.size()) != group.rank())
            throw shape_mismatch_error(group.str() + " needs " + std::to_string(group.rank()) +
                                       " characters, got " + std::to_string(chars.size()));
        CoeffElem bind = CoeffElem::monomial(group.target_q(), 0, Rational(1));
        for (UnramifiedCharacter& c : chars) c = UnramifiedCharacter(bind * c.value);
    }
};

// Unramified Langlands parameter for GL_N over a field with residue
// cardinality q_target: a multiset of invertible monomial eigenvalues, plus
// a flag for the one-dimensional component in the degenerate rank-1 case.
struct GLParam {
    int N = 0;
    std::int64_t q_target = 2;
    std::vector<CoeffElem> eigenvalues;
    std::optional<UnramifiedCharacter> degenerate_character;

    GLParam() = default;
    GLParam(std::int64_t qt, std::vector<CoeffElem> eig,
            std::optional<UnramifiedCharacter> degen = std::nullopt)
        : N(static_cast<int>(eig.size())), q_target(qt), eigenvalues(std::move(eig)),
          degenerate_character(std::move(degen)) {
        if (q_target < 2) throw domain_error("residue cardinality must be at least 2");
        CoeffElem bind = CoeffElem::monomial(q_target, 0, Rational(1));
        for (CoeffElem& e : eigenvalues) {
            e = bind * e;
            if (!e.is_monomial()) throw domain_error("eigenvalues must be invertible monomials");
        }
        if (degenerate_character)
            degenerate_character = UnramifiedCharacter(bind * degenerate_character->value);
        std::sort(eigenvalues.begin(), eigenvalues.end());
    }

    friend bool operator==(const GLParam& a, const GLParam& b) {
        return a.N == b.N && a.q_target == b.q_target && a.eigenvalues == b.eigenvalues &&
               a.degenerate_character == b.degenerate_character;
    }
    friend bool operator!=(const GLParam& a, const GLParam& b) { return !(a == b); }
};

// The explicit unramified transfer to GL_N: pair each character with its
// inverse and pad with trivial characters as the group dictates.  The split
// unitary case stores the full pair {w_i} and {w_i^{-1}}, so its eigenvalue
// count is twice the nominal transfer dimension.
inline GLParam transfer(const SatakeParam& p) {
    const GroupType& g = p.group;
    std::vector<CoeffElem> eig;
    CoeffElem unit = CoeffElem::monomial(g.target_q(), 0, Rational(1));
    auto push_pair = [&eig](const UnramifiedCharacter& c) {
        eig.push_back(c.value);
        eig.push_back(c.value.inverse());
    };
    switch (g.kind) {
        case GroupKind::sp:
            for (const auto& c : p.chars) push_pair(c);
            eig.push_back(unit);
            break;
        case GroupKind::so_odd:
        case GroupKind::so_even_square:
            for (const auto& c : p.chars) push_pair(c);
            break;
        case GroupKind::so_even_nonsquare:
            for (const auto& c : p.chars) push_pair(c);
            eig.push_back(unit);
            eig.push_back(unit);
            break;
        case GroupKind::u_inert:
            for (const auto& c : p.chars) push_pair(c);
            if (g.n % 2 != 0) eig.push_back(unit);
            break;
        case GroupKind::u_split:
            for (const auto& c : p.chars) eig.push_back(c.value);
            for (const auto& c : p.chars) eig.push_back(c.value.inverse());
            break;
    }
    return GLParam(g.target_q(), std::move(eig));
}

// Monic characteristic polynomial prod (X - lambda), leading coefficient
// first.
inline std::vector<CoeffElem> charpoly(const GLParam& t) {
    std::vector<CoeffElem> a{CoeffElem::one()};  // a[j] = coefficient of X^j
    for (const CoeffElem& lam : t.eigenvalues) {
        std::vector<CoeffElem> next(a.size() + 1);
        for (std::size_t j = 0; j < a.size(); ++j) {
            next[j + 1] = next[j + 1] + a[j];
            next[j] = next[j] - lam * a[j];
        }
        a = std::move(next);
    }
    std::reverse(a.begin(), a.end());
    return a;
}

inline bool is_integral(const GLParam& t, const Int& ell) {
    if (!is_prime(ell)) throw domain_error("ell must be prime");
    if (Int(t.q_target) % ell == 0)
        throw domain_error("ell must not divide the residue cardinality");
    for (const CoeffElem& e : t.eigenvalues)
        if (ell_adic_valuation(e.monomial_coeff(), ell) != 0) return false;
    return true;
}

inline bool is_integral(const SatakeParam& p, const Int& ell) {
    if (!is_prime(ell)) throw domain_error("ell must be prime");
    if (Int(p.group.q) % ell == 0)
        throw domain_error("ell must not divide the residue cardinality");
    for (const UnramifiedCharacter& c : p.chars)
        if (ell_adic_valuation(c.value.monomial_coeff(), ell) != 0) return false;
    return true;
}

namespace sdetail {

inline std::vector<FiniteFieldElem> reduced_sorted(const std::vector<CoeffElem>& xs,
                                                   const ReductionContext& ctx) {
    std::vector<FiniteFieldElem> out;
    out.reserve(xs.size());
    for (const CoeffElem& x : xs) out.push_back(reduce_coeff(x, ctx));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace sdetail

// Equal reduced eigenvalue multisets; equivalently, congruent characteristic
// polynomials coefficient by coefficient.
inline bool congruent_mod_ell(const GLParam& a, const GLParam& b, const ReductionContext& ctx) {
    if (a.N != b.N)
        throw shape_mismatch_error("parameters of sizes " + std::to_string(a.N) + " and " +
                                   std::to_string(b.N));
    if (a.q_target != b.q_target)
        throw shape_mismatch_error("parameters over different residue fields");
    if (!is_integral(a, Int(ctx.ell)) || !is_integral(b, Int(ctx.ell)))
        throw not_integral_error("congruence needs integral parameters at " +
                                 std::to_string(ctx.ell));
    return sdetail::reduced_sorted(a.eigenvalues, ctx) ==
           sdetail::reduced_sorted(b.eigenvalues, ctx);
}

// Reduced character tuples in the same orbit of the Weyl action, compared by
// closing under inversion and sorting.
inline bool same_support_mod_ell(const SatakeParam& a, const SatakeParam& b,
                                 const ReductionContext& ctx) {
    if (a.group != b.group) throw shape_mismatch_error("parameters on different groups");
    if (!is_integral(a, Int(ctx.ell)) || !is_integral(b, Int(ctx.ell)))
        throw not_integral_error("support comparison needs integral parameters at " +
                                 std::to_string(ctx.ell));
    auto closure = [&ctx](const SatakeParam& p) {
        std::vector<CoeffElem> vals;
        for (const UnramifiedCharacter& c : p.chars) {
            vals.push_back(c.value);
            vals.push_back(c.value.inverse());
        }
        return sdetail::reduced_sorted(vals, ctx);
    };
    return closure(a) == closure(b);
}

// Recompute the transfer with the opposite square root of q.  The change is
// a twist by the unramified quadratic character to the power (d-e-N)f, which
// is odd exactly for the even orthogonal kinds.
inline GLParam sqrt_flip(const GroupType& g, const GLParam& t) {
    auto [d, e] = g.de();
    long long expo =
        static_cast<long long>(d - e - g.transfer_dim()) * g.residue_degree();
    if (expo % 2 == 0) return t;
    std::vector<CoeffElem> eig;
    eig.reserve(t.eigenvalues.size());
    for (const CoeffElem& v : t.eigenvalues) eig.push_back(Rational(-1) * v);
    std::optional<UnramifiedCharacter> degen = t.degenerate_character;
    if (degen) degen = UnramifiedCharacter(Rational(-1) * degen->value);
    return GLParam(t.q_target, std::move(eig), std::move(degen));
}

// Exponents of the half-modulus character of the Borel on the recorded
// coordinates: (d-e-1)/2, (d-e-1)/2 - 1, ...
inline std::vector<Rational> modulus_exponents(const GroupType& g, int m) {
    if (m != g.rank())
        throw shape_mismatch_error(g.str() + " has " + std::to_string(g.rank()) +
                                   " recorded coordinates, got " + std::to_string(m));
    auto [d, e] = g.de();
    std::vector<Rational> out;
    Rational top(d - e - 1, 2);
    for (int i = 0; i < m; ++i) out.push_back(top - i);
    return out;
}

// Restriction along the unramified part of a degree-d extension with residue
// degree f: Frobenius goes to the f-th power, so each eigenvalue does too
// and the residue cardinality becomes q^f.
inline GLParam unramified_base_change(const GLParam& t, int f, int d) {
    if (f < 1 || d < f || d % f != 0)
        throw domain_error("residue degree must divide the extension degree");
    if (f == 1) return t;
    std::int64_t qf = 1;
    for (int i = 0; i < f; ++i) {
        if (qf > 1000000000000000LL / t.q_target)
            throw domain_error("residue cardinality out of range after base change");
        qf *= t.q_target;
    }
    auto power = [&](const CoeffElem& v) {
        return CoeffElem::monomial(qf, v.monomial_exp(), rational_pow(v.monomial_coeff(), f));
    };
    std::vector<CoeffElem> eig;
    eig.reserve(t.eigenvalues.size());
    for (const CoeffElem& v : t.eigenvalues) eig.push_back(power(v));
    std::optional<UnramifiedCharacter> degen;
    if (t.degenerate_character)
        degen = UnramifiedCharacter(power(t.degenerate_character->value));
    return GLParam(qf, std::move(eig), std::move(degen));
}

// Transfer from the two-dimensional split torus case: chi x chi^{-1}, which
// is irreducible unless chi^2 is |.| or its inverse; the degenerate flag
// then records the character component's value on the uniformizer.
inline GLParam so2_split_transfer(const UnramifiedCharacter& ch, std::int64_t q) {
    if (q < 2) throw domain_error("residue cardinality must be at least 2");
    CoeffElem c = CoeffElem::monomial(q, 0, Rational(1)) * ch.value;
    std::optional<UnramifiedCharacter> degen;
    const Rational gamma = c.monomial_coeff();
    int k = c.monomial_exp();
    if ((gamma == 1 || gamma == -1) && (k == 1 || k == -1))
        degen = UnramifiedCharacter(c * CoeffElem::monomial(q, -k, Rational(1)));
    return GLParam(q, {c, c.inverse()}, degen);
}

// Twist by |det|^k in half-integer steps of the formal symbol.
inline GLParam det_twist(const GLParam& t, const Rational& k) {
    Rational twice = k * 2;
    if (den(twice) != 1) throw domain_error("twist exponent must be a half-integer");
    if (twice == 0) return t;
    int hk = static_cast<int>(num(twice));
    CoeffElem mono = CoeffElem::monomial(t.q_target, hk, Rational(1));
    std::vector<CoeffElem> eig;
    eig.reserve(t.eigenvalues.size());
    for (const CoeffElem& v : t.eigenvalues) eig.push_back(mono * v);
    std::optional<UnramifiedCharacter> degen = t.degenerate_character;
    if (degen) degen = UnramifiedCharacter(mono * degen->value);
    return GLParam(t.q_target, std::move(eig), std::move(degen));
}

inline bool is_selfdual(const GLParam& t) {
    std::map<CoeffElem, int> count;
    for (const CoeffElem& e : t.eigenvalues) ++count[e];
    for (const auto& [e, c] : count) {
        auto it = count.find(e.inverse());
        if (it == count.end() || it->second != c) return false;
    }
    return true;
}

}  // namespace modl
