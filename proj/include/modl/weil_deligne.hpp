#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "modl/coeff.hpp"
#include "modl/error.hpp"
#include "modl/finite_field.hpp"
#include "modl/matrix.hpp"
#include "modl/ratfun.hpp"
#include "modl/rational.hpp"
#include "modl/satake.hpp"

namespace modl {

// Deligne representation with unramified or finite-image inertia: the
// Frobenius matrix, the nilpotent operator it scales by 1/q, and an optional
// finite-order inertia action.
struct WDRep {
    std::int64_t q = 2;
    Matrix<CoeffElem> frobenius;
    Matrix<CoeffElem> nilpotent;
    std::optional<Matrix<CoeffElem>> inertia_action;

    WDRep(std::int64_t q_, Matrix<CoeffElem> f, Matrix<CoeffElem> nil,
          std::optional<Matrix<CoeffElem>> inertia = std::nullopt)
        : q(q_), frobenius(std::move(f)), nilpotent(std::move(nil)),
          inertia_action(std::move(inertia)) {
        if (q < 2) throw domain_error("residue cardinality must be at least 2");
        if (frobenius.dim() != nilpotent.dim())
            throw shape_mismatch_error("frobenius and nilpotent sizes differ");
        if (inertia_action && inertia_action->dim() != frobenius.dim())
            throw shape_mismatch_error("inertia action size differs");
        bind(frobenius);
        bind(nilpotent);
        if (inertia_action) bind(*inertia_action);
    }

    int dim() const { return frobenius.dim(); }

private:
    void bind(Matrix<CoeffElem>& m) {
        CoeffElem one_q = CoeffElem::monomial(q, 0, Rational(1));
        for (int i = 0; i < m.dim(); ++i)
            for (int j = 0; j < m.dim(); ++j) m.at(i, j) = one_q * m.at(i, j);
    }
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> defects;
};

inline ValidationReport validate(const WDRep& w) {
    ValidationReport rep;
    auto flag = [&rep](const std::string& s) {
        rep.ok = false;
        rep.defects.push_back(s);
    };
    int n = w.dim();
    if (determinant(w.frobenius) == CoeffElem()) flag("frobenius is not invertible");
    if (!w.nilpotent.pow(n).is_zero()) flag("nilpotent part is not nilpotent");
    CoeffElem qinv = CoeffElem::monomial(w.q, -2, Rational(1));
    if (w.frobenius * w.nilpotent != qinv * (w.nilpotent * w.frobenius))
        flag("frobenius conjugation does not scale the nilpotent by 1/q");
    if (w.inertia_action) {
        const Matrix<CoeffElem>& s = *w.inertia_action;
        if (determinant(s) == CoeffElem()) {
            flag("inertia action is not invertible");
        } else {
            Matrix<CoeffElem> p = s;
            Matrix<CoeffElem> id = Matrix<CoeffElem>::identity(n);
            bool finite = false;
            for (int k = 1; k <= 240 && !finite; ++k) {
                if (p == id) finite = true;
                p = p * s;
            }
            if (!finite) flag("inertia action has no finite order within the search bound");
        }
        if (s * w.nilpotent != w.nilpotent * s)
            flag("inertia action does not commute with the nilpotent");
    }
    return rep;
}

namespace wdetail {

inline CoeffElem eval_at_monomial(const std::vector<CoeffElem>& cp, const CoeffElem& lam) {
    CoeffElem acc;
    for (const CoeffElem& c : cp) acc = acc * lam + c;
    return acc;
}

// Nonzero rational roots of a Q-polynomial, by the rational root bound.
inline std::vector<Rational> rational_roots(const rfdetail::QPoly& poly) {
    rfdetail::QPoly p = poly;
    std::size_t lo = 0;
    while (lo < p.size() && p[lo] == 0) ++lo;
    p.erase(p.begin(), p.begin() + lo);
    rfdetail::trim(p);
    std::vector<Rational> roots;
    if (p.size() <= 1) return roots;
    Int mult = 1;
    for (const Rational& c : p) {
        Int d = den(c);
        mult = mult / boost::multiprecision::gcd(mult, d) * d;
    }
    std::vector<Int> ip;
    ip.reserve(p.size());
    for (const Rational& c : p) ip.push_back(num(c * Rational(mult)));
    for (const Int& top : divisors(ip.front()))
        for (const Int& bot : divisors(ip.back()))
            for (int sign : {1, -1}) {
                Rational cand(sign * top, bot);
                Rational v = 0;
                for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * cand + *it;
                if (v == 0) roots.push_back(cand);
            }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// One monomial root of a monic coefficient-ring polynomial (leading first),
// if any: candidate exponents come from the Newton polygon slopes, candidate
// rational coefficients from one exponent level, verified by evaluation.
inline std::optional<CoeffElem> find_monomial_root(const std::vector<CoeffElem>& cp,
                                                   std::int64_t base) {
    int d = static_cast<int>(cp.size()) - 1;
    std::vector<CoeffElem> a(d + 1);  // a[p] = coefficient of X^p
    for (int i = 0; i <= d; ++i) a[d - i] = cp[i];
    if (a[0].is_zero()) return std::nullopt;
    std::set<int> slopes;
    for (int p1 = 1; p1 <= d; ++p1) {
        if (a[p1].is_zero()) continue;
        for (int p2 = 0; p2 < p1; ++p2) {
            if (a[p2].is_zero()) continue;
            for (const auto& [e1, c1] : a[p1].terms())
                for (const auto& [e2, c2] : a[p2].terms())
                    if ((e2 - e1) % (p1 - p2) == 0) slopes.insert((e2 - e1) / (p1 - p2));
        }
    }
    for (int k : slopes) {
        // Group the substitution X = c z^k by total z-exponent; every level
        // must vanish at the root's coefficient.
        std::map<int, rfdetail::QPoly> levels;
        for (int p = 0; p <= d; ++p)
            for (const auto& [e, coef] : a[p].terms()) {
                rfdetail::QPoly& level = levels[e + p * k];
                if (static_cast<int>(level.size()) < p + 1) level.resize(p + 1, Rational(0));
                level[p] += coef;
            }
        std::vector<Rational> cands;
        bool impossible = false;
        for (const auto& [e, level] : levels) {
            rfdetail::QPoly t = level;
            rfdetail::trim(t);
            if (t.empty()) continue;
            if (t.size() == 1) {
                impossible = true;
                break;
            }
            cands = rational_roots(t);
            break;
        }
        if (impossible) continue;
        for (const Rational& c : cands) {
            if (c == 0) continue;
            CoeffElem lam = CoeffElem::monomial(base, k, c);
            if (eval_at_monomial(cp, lam).is_zero()) return lam;
        }
    }
    return std::nullopt;
}

inline std::vector<RatFun> poly_from_roots(const std::vector<CoeffElem>& roots) {
    std::vector<RatFun> p{RatFun(Rational(1))};  // ascending in X
    for (const CoeffElem& lam : roots) {
        std::vector<RatFun> nxt(p.size() + 1);
        RatFun l{lam};
        for (std::size_t i = 0; i < p.size(); ++i) {
            nxt[i + 1] = nxt[i + 1] + p[i];
            nxt[i] = nxt[i] - l * p[i];
        }
        p = std::move(nxt);
    }
    return p;
}

inline Matrix<RatFun> eval_poly(const std::vector<RatFun>& p, const Matrix<RatFun>& s) {
    Matrix<RatFun> acc(s.dim());
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc = acc * s;
        for (int i = 0; i < s.dim(); ++i) acc.at(i, i) = acc.at(i, i) + *it;
    }
    return acc;
}

inline bool entry_integral(const CoeffElem& x, const Int& ell) {
    return x.is_zero() || x.min_coeff_valuation(ell) >= 0;
}

}  // namespace wdetail

// Eigenvalue multiset (with multiplicity, canonically sorted) of a monic
// polynomial whose roots are all invertible monomials.
inline std::vector<CoeffElem> monomial_roots(std::vector<CoeffElem> cp, std::int64_t base) {
    if (cp.empty() || cp.front() != CoeffElem::one())
        throw domain_error("characteristic polynomial must be monic");
    std::vector<CoeffElem> roots;
    while (cp.size() > 1) {
        std::optional<CoeffElem> lam = wdetail::find_monomial_root(cp, base);
        if (!lam)
            throw unsupported_spectrum_error(
                "spectrum is not a multiset of invertible monomials");
        roots.push_back(*lam);
        std::vector<CoeffElem> next(cp.size() - 1);
        next[0] = cp[0];
        for (std::size_t i = 1; i + 1 < cp.size(); ++i) next[i] = cp[i] + *lam * next[i - 1];
        cp = std::move(next);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

inline std::vector<CoeffElem> frobenius_eigenvalues(const WDRep& w) {
    return monomial_roots(charpoly_matrix(w.frobenius), w.q);
}

// Semisimple factor of the multiplicative Jordan decomposition of the
// Frobenius matrix, computed by Newton iteration on the squarefree part of
// the spectrum over the fraction field.  The result must land back in the
// coefficient ring; spectra where it does not are rejected.
inline WDRep frobenius_ss(const WDRep& w) {
    std::vector<CoeffElem> roots = frobenius_eigenvalues(w);
    std::vector<CoeffElem> distinct;
    for (const CoeffElem& r : roots)
        if (distinct.empty() || distinct.back() != r) distinct.push_back(r);
    if (distinct.size() == roots.size()) return w;

    int n = w.dim();
    Matrix<CoeffElem> probe = Matrix<CoeffElem>::identity(n);
    for (const CoeffElem& lam : distinct) {
        Matrix<CoeffElem> f = w.frobenius;
        for (int i = 0; i < n; ++i) f.at(i, i) = f.at(i, i) - lam;
        probe = probe * f;
    }
    if (probe.is_zero()) return w;

    std::vector<RatFun> p = wdetail::poly_from_roots(distinct);
    std::vector<RatFun> pd;
    for (std::size_t i = 1; i < p.size(); ++i)
        pd.push_back(Rational(static_cast<int>(i)) * p[i]);
    Matrix<RatFun> s =
        map_entries<RatFun>(w.frobenius, [](const CoeffElem& c) { return RatFun(c); });
    for (int iter = 0; iter < 8; ++iter) {
        Matrix<RatFun> ps = wdetail::eval_poly(p, s);
        if (ps.is_zero()) break;
        s = s - ps * gauss_inverse(wdetail::eval_poly(pd, s));
    }
    if (!wdetail::eval_poly(p, s).is_zero())
        throw domain_error("semisimple factor iteration did not converge");
    Matrix<CoeffElem> out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const RatFun& e = s.at(i, j);
            if (!e.is_laurent())
                throw unsupported_spectrum_error(
                    "semisimple factor leaves the coefficient ring");
            out.at(i, j) = e.to_coeff();
        }
    return WDRep(w.q, std::move(out), w.nilpotent, w.inertia_action);
}

inline WDRep wd_of_glparam(const GLParam& t) {
    if (t.N < 1) throw domain_error("parameter must have positive size");
    Matrix<CoeffElem> f(t.N), z(t.N);
    for (int i = 0; i < t.N; ++i) f.at(i, i) = t.eigenvalues[i];
    return WDRep(t.q_target, std::move(f), std::move(z));
}

inline GLParam glparam_of_wd(const WDRep& w) {
    if (!w.nilpotent.is_zero())
        throw domain_error("parameter extraction needs vanishing monodromy");
    if (w.inertia_action && *w.inertia_action != Matrix<CoeffElem>::identity(w.dim()))
        throw domain_error("parameter extraction needs trivial inertia");
    std::vector<CoeffElem> roots = frobenius_eigenvalues(w);
    std::vector<CoeffElem> distinct;
    for (const CoeffElem& r : roots)
        if (distinct.empty() || distinct.back() != r) distinct.push_back(r);
    if (distinct.size() != roots.size()) {
        Matrix<CoeffElem> probe = Matrix<CoeffElem>::identity(w.dim());
        for (const CoeffElem& lam : distinct) {
            Matrix<CoeffElem> f = w.frobenius;
            for (int i = 0; i < w.dim(); ++i) f.at(i, i) = f.at(i, i) - lam;
            probe = probe * f;
        }
        if (!probe.is_zero())
            throw unsupported_spectrum_error(
                "frobenius is not semisimple; apply the semisimplification first");
    }
    return GLParam(w.q, std::move(roots));
}

struct IntegralModelResult {
    WDRep model;
    int valuation = 0;  // v in the conjugator diag(ell^v, ..., 1, ...)
    Matrix<CoeffElem> conjugator;
};

// The 2-block inductive step: conjugate by diag(ell^v id_k, id) with the
// minimal v >= 0 clearing the denominators of the upper-right block.
inline IntegralModelResult integral_model(const WDRep& w, const Int& ell, int k) {
    if (!is_prime(ell)) throw domain_error("ell must be prime");
    if (Int(w.q) % ell == 0) throw domain_error("ell must not divide the residue cardinality");
    if (!w.nilpotent.is_zero()) throw domain_error("integral model needs vanishing monodromy");
    int n = w.dim();
    if (k < 1 || k >= n) throw domain_error("block split must be interior");
    const Matrix<CoeffElem>& f = w.frobenius;
    for (int i = k; i < n; ++i)
        for (int j = 0; j < k; ++j)
            if (!f.at(i, j).is_zero())
                throw domain_error("frobenius is not block upper-triangular at the split");
    auto check_block = [&](int lo, int hi) {
        Matrix<CoeffElem> b(hi - lo);
        for (int i = lo; i < hi; ++i)
            for (int j = lo; j < hi; ++j) {
                if (!wdetail::entry_integral(f.at(i, j), ell))
                    throw not_integral_error("diagonal block entry is not integral at " +
                                             format_int(ell));
                b.at(i - lo, j - lo) = f.at(i, j);
            }
        CoeffElem det = determinant(b);
        if (det.is_zero() || det.min_coeff_valuation(ell) != 0)
            throw not_integral_error("diagonal block determinant does not reduce to a unit");
    };
    check_block(0, k);
    check_block(k, n);

    int v = 0;
    for (int i = 0; i < k; ++i)
        for (int j = k; j < n; ++j)
            if (!f.at(i, j).is_zero())
                v = std::max(v, -f.at(i, j).min_coeff_valuation(ell));

    Rational scale(rational_pow(Rational(ell), v));
    Matrix<CoeffElem> model_f = f;
    for (int i = 0; i < k; ++i)
        for (int j = k; j < n; ++j) model_f.at(i, j) = scale * model_f.at(i, j);
    std::optional<Matrix<CoeffElem>> inertia = w.inertia_action;
    if (inertia) {
        Rational inv_scale = Rational(1) / scale;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i < k && j >= k) inertia->at(i, j) = scale * inertia->at(i, j);
                if (i >= k && j < k) inertia->at(i, j) = inv_scale * inertia->at(i, j);
            }
    }
    Matrix<CoeffElem> conj = Matrix<CoeffElem>::identity(n);
    for (int i = 0; i < k; ++i) conj.at(i, i) = CoeffElem(scale);
    return IntegralModelResult{WDRep(w.q, std::move(model_f), w.nilpotent, std::move(inertia)),
                               v, std::move(conj)};
}

// Convenience form: no-op when already integral, otherwise the first
// admissible interior split.
inline IntegralModelResult integral_model(const WDRep& w, const Int& ell) {
    if (!is_prime(ell)) throw domain_error("ell must be prime");
    if (Int(w.q) % ell == 0) throw domain_error("ell must not divide the residue cardinality");
    if (!w.nilpotent.is_zero()) throw domain_error("integral model needs vanishing monodromy");
    int n = w.dim();
    bool integral = true;
    for (int i = 0; i < n && integral; ++i)
        for (int j = 0; j < n && integral; ++j)
            if (!wdetail::entry_integral(w.frobenius.at(i, j), ell)) integral = false;
    if (integral)
        return IntegralModelResult{w, 0, Matrix<CoeffElem>::identity(n)};
    for (int k = 1; k < n; ++k) {
        bool block = true;
        for (int i = k; i < n && block; ++i)
            for (int j = 0; j < k && block; ++j)
                if (!w.frobenius.at(i, j).is_zero()) block = false;
        if (!block) continue;
        try {
            return integral_model(w, ell, k);
        } catch (const not_integral_error&) {
            continue;
        }
    }
    throw domain_error("no admissible block split makes the representation integral");
}

// Reduced Frobenius eigenvalue multiset of an unramified representation.
inline std::vector<FiniteFieldElem> reduce_wd(const WDRep& w, const ReductionContext& ctx) {
    if (!w.nilpotent.is_zero()) throw domain_error("reduction needs vanishing monodromy");
    std::vector<CoeffElem> roots = frobenius_eigenvalues(w);
    std::vector<FiniteFieldElem> out;
    out.reserve(roots.size());
    for (const CoeffElem& r : roots) {
        if (ell_adic_valuation(r.monomial_coeff(), Int(ctx.ell)) != 0)
            throw not_integral_error("frobenius eigenvalue is not a unit at " +
                                     std::to_string(ctx.ell) + ": " + r.str());
        out.push_back(reduce_coeff(r, ctx));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool congruent_wd(const WDRep& a, const WDRep& b, const ReductionContext& ctx) {
    if (a.dim() != b.dim())
        throw shape_mismatch_error("representations of different dimension");
    if (a.q != b.q) throw shape_mismatch_error("representations over different residue fields");
    return reduce_wd(a, ctx) == reduce_wd(b, ctx);
}

}  // namespace modl
