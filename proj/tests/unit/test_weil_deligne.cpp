#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <random>
#include <vector>

#include "modl/error.hpp"
#include "modl/weil_deligne.hpp"

using modl::CoeffElem;
using modl::congruent_mod_ell;
using modl::congruent_wd;
using modl::FiniteFieldElem;
using modl::frobenius_ss;
using modl::GLParam;
using modl::glparam_of_wd;
using modl::GroupKind;
using modl::GroupType;
using modl::Int;
using modl::integral_model;
using modl::IntegralModelResult;
using modl::Matrix;
using modl::Rational;
using modl::RatFun;
using modl::reduce_wd;
using modl::ReductionContext;
using modl::SatakeParam;
using modl::UnramifiedCharacter;
using modl::WDRep;
using modl::wd_of_glparam;

namespace {

CoeffElem mono(std::int64_t q, int k, const Rational& c = Rational(1)) {
    return CoeffElem::monomial(q, k, c);
}

CoeffElem sc(const Rational& c) { return CoeffElem(c); }

Matrix<CoeffElem> mat(int n, std::vector<CoeffElem> entries) {
    return Matrix<CoeffElem>(n, std::move(entries));
}

Matrix<CoeffElem> diag(std::vector<CoeffElem> entries) {
    int n = static_cast<int>(entries.size());
    Matrix<CoeffElem> m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = entries[i];
    return m;
}

Matrix<CoeffElem> zero(int n) { return Matrix<CoeffElem>(n); }

struct Conj {
    Matrix<CoeffElem> p, pinv;
};

// Random product of elementary shears: unimodular with a Laurent inverse.
Conj random_unimodular(std::mt19937& rng, int n, std::int64_t q) {
    Conj c{Matrix<CoeffElem>::identity(n), Matrix<CoeffElem>::identity(n)};
    static const std::vector<Rational> pool{Rational(1), Rational(-1), Rational(2),
                                            Rational(1, 2), Rational(-3)};
    std::uniform_int_distribution<int> pick(0, n - 1), expd(-2, 2),
        coeffd(0, static_cast<int>(pool.size()) - 1);
    for (int step = 0; step < 2 * n; ++step) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        CoeffElem f = mono(q, expd(rng), pool[coeffd(rng)]);
        for (int r = 0; r < n; ++r) c.p.at(r, j) = c.p.at(r, j) + c.p.at(r, i) * f;
        for (int col = 0; col < n; ++col)
            c.pinv.at(i, col) = c.pinv.at(i, col) - f * c.pinv.at(j, col);
    }
    return c;
}

CoeffElem random_monomial(std::mt19937& rng, std::int64_t q) {
    static const std::vector<Rational> pool{Rational(1), Rational(-1), Rational(2),
                                            Rational(1, 2), Rational(7, 2)};
    std::uniform_int_distribution<int> expd(-3, 3), coeffd(0, static_cast<int>(pool.size()) - 1);
    return mono(q, expd(rng), pool[coeffd(rng)]);
}

}  // namespace

TEST_CASE("matrices multiply, power, and expand characteristic polynomials",
          "[weil_deligne]") {
    Matrix<CoeffElem> f = diag({sc(1), mono(5, 2)});
    std::vector<CoeffElem> cp = charpoly_matrix(f);
    REQUIRE(cp == std::vector<CoeffElem>{CoeffElem::one(), -(sc(1) + mono(5, 2)), mono(5, 2)});
    REQUIRE(determinant(f) == mono(5, 2));

    Matrix<CoeffElem> u = mat(2, {sc(1), sc(1), sc(0), sc(1)});
    REQUIRE(charpoly_matrix(u) == std::vector<CoeffElem>{sc(1), sc(-2), sc(1)});
    REQUIRE(u.pow(3) == mat(2, {sc(1), sc(3), sc(0), sc(1)}));

    Matrix<CoeffElem> n(2);
    n.at(0, 1) = sc(1);
    REQUIRE(n.pow(2).is_zero());
    REQUIRE_FALSE(n.is_zero());

    REQUIRE_THROWS_AS(mat(2, {sc(1)}), modl::shape_mismatch_error);
    REQUIRE_THROWS_AS(Matrix<CoeffElem>(0), modl::domain_error);
}

TEST_CASE("the fraction field cancels and detects Laurent elements", "[weil_deligne]") {
    CoeffElem z2m1 = mono(5, 2) - sc(1);   // q - 1
    CoeffElem z4m1 = mono(5, 4) - sc(1);   // q^2 - 1
    RatFun r(z2m1, z4m1);
    REQUIRE_FALSE(r.is_laurent());
    REQUIRE(r.num() == CoeffElem::one());
    REQUIRE(r.den() == mono(5, 2) + sc(1));
    REQUIRE_THROWS_AS(r.to_coeff(), modl::domain_error);

    RatFun s(z4m1, z2m1);
    REQUIRE(s.is_laurent());
    REQUIRE(s.to_coeff() == mono(5, 2) + sc(1));

    CoeffElem zm1 = mono(5, 1) - sc(1), zp1 = mono(5, 1) + sc(1);
    RatFun sum = RatFun(sc(1), zm1) + RatFun(sc(1), zp1);
    REQUIRE(sum == RatFun(mono(5, 1, Rational(2)), mono(5, 2) - sc(1)));
    REQUIRE(sum * RatFun(mono(5, 2) - sc(1)) == RatFun(mono(5, 1, Rational(2))));
    REQUIRE((sum - sum).is_zero());

    RatFun shifted(mono(5, -3), zm1);
    REQUIRE(shifted.num() == mono(5, -3));
    REQUIRE(shifted.den() == zm1);
    REQUIRE(shifted.inverse() == RatFun(zm1 * mono(5, 3)));

    REQUIRE_THROWS_AS(RatFun(sc(1), CoeffElem()), modl::domain_error);
    REQUIRE_THROWS_AS(RatFun().inverse(), modl::domain_error);

    Matrix<RatFun> m(2, {RatFun(sc(1)), RatFun(sc(1)), RatFun(), RatFun(mono(5, 2))});
    Matrix<RatFun> minv = gauss_inverse(m);
    REQUIRE(m * minv == Matrix<RatFun>::identity(2));
    Matrix<RatFun> sing(2, {RatFun(sc(1)), RatFun(sc(1)), RatFun(sc(1)), RatFun(sc(1))});
    REQUIRE_THROWS_AS(gauss_inverse(sing), modl::domain_error);
}

TEST_CASE("validation reports the defining relations", "[weil_deligne]") {
    Matrix<CoeffElem> e12(2);
    e12.at(0, 1) = sc(1);

    SECTION("the twisted commutation accepts the scaling pair") {
        WDRep w(5, diag({sc(1), mono(5, 2)}), e12);
        REQUIRE(validate(w).ok);
    }

    SECTION("identity frobenius cannot scale a nonzero nilpotent") {
        WDRep w(5, Matrix<CoeffElem>::identity(2), e12);
        modl::ValidationReport rep = validate(w);
        REQUIRE_FALSE(rep.ok);
        REQUIRE(rep.defects.size() == 1);
    }

    SECTION("zero nilpotent always commutes") {
        WDRep w(5, mat(2, {sc(2), sc(1), sc(1), sc(1)}), zero(2));
        REQUIRE(validate(w).ok);
    }

    SECTION("defects accumulate") {
        WDRep w(5, mat(2, {sc(1), sc(1), sc(1), sc(1)}), Matrix<CoeffElem>::identity(2));
        modl::ValidationReport rep = validate(w);
        REQUIRE_FALSE(rep.ok);
        REQUIRE(rep.defects.size() == 3);  // singular, not nilpotent, no scaling
    }

    SECTION("inertia checks order, invertibility, and commutation") {
        Matrix<CoeffElem> swap = mat(2, {sc(0), sc(1), sc(1), sc(0)});
        REQUIRE(validate(WDRep(5, diag({sc(1), sc(1)}), zero(2), swap)).ok);

        WDRep infinite(5, diag({sc(1), sc(1)}), zero(2), mat(2, {sc(1), sc(1), sc(0), sc(1)}));
        REQUIRE_FALSE(validate(infinite).ok);

        WDRep sign_clash(5, diag({sc(1), mono(5, 2)}), e12, diag({sc(1), sc(-1)}));
        modl::ValidationReport rep = validate(sign_clash);
        REQUIRE_FALSE(rep.ok);
        REQUIRE(rep.defects.size() == 1);

        WDRep singular_inertia(5, diag({sc(1), sc(1)}), zero(2),
                               mat(2, {sc(1), sc(1), sc(1), sc(1)}));
        REQUIRE_FALSE(validate(singular_inertia).ok);
    }

    SECTION("shape mismatches are rejected at construction") {
        REQUIRE_THROWS_AS(WDRep(5, diag({sc(1), sc(1)}), zero(3)), modl::shape_mismatch_error);
        REQUIRE_THROWS_AS(WDRep(5, diag({sc(1), sc(1)}), zero(2), zero(3)),
                          modl::shape_mismatch_error);
        REQUIRE_THROWS_AS(WDRep(1, diag({sc(1)}), zero(1)), modl::domain_error);
        REQUIRE_THROWS_AS(WDRep(5, diag({mono(7, 1)}), zero(1)), modl::domain_error);
    }
}

TEST_CASE("semisimplification strips the unipotent factor", "[weil_deligne]") {
    SECTION("unipotent matrices collapse to the identity") {
        WDRep w(5, mat(2, {sc(1), sc(1), sc(0), sc(1)}), zero(2));
        WDRep s = frobenius_ss(w);
        REQUIRE(s.frobenius == Matrix<CoeffElem>::identity(2));
        REQUIRE(s.nilpotent == w.nilpotent);
        REQUIRE(frobenius_ss(s).frobenius == s.frobenius);
    }

    SECTION("distinct spectra are already semisimple") {
        WDRep w(5, mat(2, {mono(5, 1), sc(5), sc(0), sc(2)}), zero(2));
        REQUIRE(frobenius_ss(w).frobenius == w.frobenius);
    }

    SECTION("a scalar plus nilpotent splits off its scalar") {
        CoeffElem a = mono(5, 2);
        WDRep w(5, mat(2, {a, sc(1), sc(0), a}), zero(2));
        REQUIRE(frobenius_ss(w).frobenius == diag({a, a}));
    }

    SECTION("non-monomial spectra are rejected") {
        WDRep w(5, mat(2, {sc(0), sc(1), sc(1), sc(1)}), zero(2));
        REQUIRE_THROWS_AS(frobenius_ss(w), modl::unsupported_spectrum_error);
    }

    SECTION("semisimple factors outside the coefficient ring are rejected") {
        WDRep w(5,
                mat(3, {sc(1), sc(1), sc(0),
                        sc(0), sc(1), sc(1),
                        sc(0), sc(0), mono(5, 2)}),
                zero(3));
        REQUIRE_THROWS_AS(frobenius_ss(w), modl::unsupported_spectrum_error);
    }

    SECTION("conjugated block instances recover the conjugated diagonal") {
        std::mt19937 rng(2718);
        for (int trial = 0; trial < 40; ++trial) {
            CoeffElem l1 = random_monomial(rng, 5), l2 = random_monomial(rng, 5);
            if (l1 == l2) continue;
            Matrix<CoeffElem> d = diag({l1, l1, l2});
            Matrix<CoeffElem> f0 = d;
            f0.at(0, 1) = l1;  // d * (I + E12), staying inside the repeated block
            Conj c = random_unimodular(rng, 3, 5);
            REQUIRE(c.p * c.pinv == Matrix<CoeffElem>::identity(3));
            WDRep w(5, c.p * f0 * c.pinv, zero(3));
            WDRep s = frobenius_ss(w);
            REQUIRE(s.frobenius == c.p * d * c.pinv);
            REQUIRE(charpoly_matrix(s.frobenius) == charpoly_matrix(w.frobenius));
            REQUIRE(frobenius_ss(s).frobenius == s.frobenius);
        }
    }

    SECTION("a compatible nilpotent keeps the twisted commutation") {
        std::mt19937 rng(111);
        for (int trial = 0; trial < 25; ++trial) {
            CoeffElem a = random_monomial(rng, 5);
            // eigenvalues (a, q a, a) with the nilpotent mapping the q a line
            Matrix<CoeffElem> d = diag({a, mono(5, 2) * a, a});
            Matrix<CoeffElem> f0 = d;
            f0.at(0, 2) = a;  // unipotent coupling within the repeated eigenvalue
            Matrix<CoeffElem> n0(3);
            n0.at(0, 1) = sc(1);  // F n = q^{-1} n F on the (a, q a) pair
            Conj c = random_unimodular(rng, 3, 5);
            WDRep w(5, c.p * f0 * c.pinv, c.p * n0 * c.pinv);
            REQUIRE(validate(w).ok);
            WDRep s = frobenius_ss(w);
            REQUIRE(s.frobenius == c.p * d * c.pinv);
            REQUIRE(s.nilpotent == w.nilpotent);
            REQUIRE(validate(s).ok);
        }
    }
}

TEST_CASE("the unramified dictionary round-trips", "[weil_deligne]") {
    SECTION("triple trivial eigenvalue") {
        GLParam t(3, {sc(1), sc(1), sc(1)});
        WDRep w = wd_of_glparam(t);
        REQUIRE(w.frobenius == Matrix<CoeffElem>::identity(3));
        REQUIRE(w.nilpotent.is_zero());
        REQUIRE(validate(w).ok);
        REQUIRE(glparam_of_wd(w) == t);
    }

    SECTION("dual pair of square roots") {
        GLParam t(5, {mono(5, 1), mono(5, -1)});
        WDRep w = wd_of_glparam(t);
        REQUIRE(w.frobenius == diag({mono(5, -1), mono(5, 1)}));
        REQUIRE(glparam_of_wd(w) == t);
    }

    SECTION("non-semisimple input is rejected until semisimplified") {
        WDRep w(5, mat(2, {sc(1), sc(1), sc(0), sc(1)}), zero(2));
        REQUIRE_THROWS_AS(glparam_of_wd(w), modl::unsupported_spectrum_error);
        REQUIRE(glparam_of_wd(frobenius_ss(w)) == GLParam(5, {sc(1), sc(1)}));
    }

    SECTION("monodromy and nontrivial inertia are rejected") {
        Matrix<CoeffElem> e12(2);
        e12.at(0, 1) = sc(1);
        REQUIRE_THROWS_AS(glparam_of_wd(WDRep(5, diag({sc(1), mono(5, 2)}), e12)),
                          modl::domain_error);
        WDRep swapped(5, diag({sc(1), sc(1)}), zero(2), mat(2, {sc(0), sc(1), sc(1), sc(0)}));
        REQUIRE_THROWS_AS(glparam_of_wd(swapped), modl::domain_error);
        WDRep trivial(5, diag({sc(1), sc(1)}), zero(2), Matrix<CoeffElem>::identity(2));
        REQUIRE(glparam_of_wd(trivial) == GLParam(5, {sc(1), sc(1)}));
    }

    SECTION("random transfers validate and round-trip") {
        std::mt19937 rng(31337);
        std::vector<GroupKind> kinds{GroupKind::sp, GroupKind::so_odd, GroupKind::u_split};
        for (GroupKind k : kinds)
            for (int trial = 0; trial < 15; ++trial) {
                GroupType g(k, 2, 5);
                std::vector<UnramifiedCharacter> cs;
                for (int i = 0; i < g.rank(); ++i)
                    cs.push_back(UnramifiedCharacter(random_monomial(rng, g.target_q())));
                GLParam t = transfer(SatakeParam(g, std::move(cs)));
                WDRep w = wd_of_glparam(t);
                REQUIRE(validate(w).ok);
                REQUIRE(glparam_of_wd(w) == t);
            }
    }
}

TEST_CASE("integral models rescale the off-diagonal block", "[weil_deligne]") {
    SECTION("already integral representations pass through") {
        WDRep w(5, mat(2, {sc(1), sc(1), sc(0), mono(5, 2)}), zero(2));
        IntegralModelResult r = integral_model(w, Int(3));
        REQUIRE(r.valuation == 0);
        REQUIRE(r.model.frobenius == w.frobenius);
        REQUIRE(r.conjugator == Matrix<CoeffElem>::identity(2));
        IntegralModelResult rk = integral_model(w, Int(3), 1);
        REQUIRE(rk.valuation == 0);
        REQUIRE(rk.model.frobenius == w.frobenius);
    }

    SECTION("denominators in the corner are cleared by the minimal power") {
        WDRep w(5, mat(2, {sc(1), sc(Rational(1, 9)), sc(0), sc(1)}), zero(2));
        IntegralModelResult r = integral_model(w, Int(3), 1);
        REQUIRE(r.valuation == 2);
        REQUIRE(r.model.frobenius == mat(2, {sc(1), sc(1), sc(0), sc(1)}));
        REQUIRE(r.conjugator == diag({sc(9), sc(1)}));
        IntegralModelResult rs = integral_model(w, Int(3));
        REQUIRE(rs.valuation == 2);
    }

    SECTION("integral corners are left untouched") {
        WDRep w(5, mat(2, {sc(2), sc(Rational(1, 2)), sc(0), sc(3)}), zero(2));
        IntegralModelResult r = integral_model(w, Int(7), 1);
        REQUIRE(r.valuation == 0);
        REQUIRE(r.model.frobenius == w.frobenius);
    }

    SECTION("the deepest denominator sets the valuation") {
        WDRep w(5,
                mat(3, {sc(1), sc(Rational(1, 3)), sc(Rational(1, 27)),
                        sc(0), sc(1), sc(1),
                        sc(0), sc(0), sc(1)}),
                zero(3));
        IntegralModelResult r = integral_model(w, Int(3), 1);
        REQUIRE(r.valuation == 3);
        REQUIRE(r.model.frobenius == mat(3, {sc(1), sc(9), sc(1),
                                             sc(0), sc(1), sc(1),
                                             sc(0), sc(0), sc(1)}));
        ReductionContext ctx = modl::build_reduction_context(7, 5);
        REQUIRE(reduce_wd(r.model, ctx) == reduce_wd(w, ctx));
    }

    SECTION("preconditions are enforced") {
        Matrix<CoeffElem> e12(2);
        e12.at(0, 1) = sc(1);
        WDRep ramified(5, diag({sc(1), mono(5, 2)}), e12);
        REQUIRE_THROWS_AS(integral_model(ramified, Int(3), 1), modl::domain_error);

        WDRep lower(5, mat(2, {sc(1), sc(0), sc(1), sc(1)}), zero(2));
        REQUIRE_THROWS_AS(integral_model(lower, Int(3), 1), modl::domain_error);

        WDRep bad_block(5, mat(2, {sc(Rational(1, 3)), sc(0), sc(0), sc(1)}), zero(2));
        REQUIRE_THROWS_AS(integral_model(bad_block, Int(3), 1), modl::not_integral_error);

        WDRep nonunit(5, mat(2, {sc(3), sc(1), sc(0), sc(1)}), zero(2));
        REQUIRE_THROWS_AS(integral_model(nonunit, Int(3), 1), modl::not_integral_error);

        WDRep fine(5, diag({sc(1), sc(1)}), zero(2));
        REQUIRE_THROWS_AS(integral_model(fine, Int(5), 1), modl::domain_error);
        REQUIRE_THROWS_AS(integral_model(fine, Int(4), 1), modl::domain_error);
        REQUIRE_THROWS_AS(integral_model(fine, Int(3), 0), modl::domain_error);
        REQUIRE_THROWS_AS(integral_model(fine, Int(3), 2), modl::domain_error);
    }

    SECTION("random two-block instances stay conjugate and integral") {
        std::mt19937 rng(90210);
        std::uniform_int_distribution<int> vald(-3, 2), kd(1, 3);
        ReductionContext ctx = modl::build_reduction_context(3, 5);
        for (int trial = 0; trial < 30; ++trial) {
            int n = 4, k = kd(rng);
            Matrix<CoeffElem> f(n);
            // diagonal entries from the coefficient pool are all 3-adic units
            for (int i = 0; i < n; ++i) f.at(i, i) = random_monomial(rng, 5);
            for (int i = 0; i < k; ++i)
                for (int j = k; j < n; ++j)
                    f.at(i, j) = sc(modl::rational_pow(Rational(3), vald(rng)));
            WDRep w(5, f, zero(n));
            IntegralModelResult r = integral_model(w, Int(3), k);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const CoeffElem& e = r.model.frobenius.at(i, j);
                    REQUIRE((e.is_zero() || e.min_coeff_valuation(Int(3)) >= 0));
                }
            REQUIRE(r.model.frobenius * r.conjugator == r.conjugator * w.frobenius);
            REQUIRE(reduce_wd(r.model, ctx) == reduce_wd(w, ctx));
        }
    }
}

TEST_CASE("reduction and congruence mirror the parameter level", "[weil_deligne]") {
    ReductionContext ctx = modl::build_reduction_context(3, 5);

    SECTION("worked examples") {
        WDRep a(5, diag({mono(5, 1)}), zero(1));
        WDRep b(5, diag({mono(5, 1, Rational(4))}), zero(1));
        REQUIRE(congruent_wd(a, a, ctx));
        REQUIRE(congruent_wd(a, b, ctx));

        WDRep one(5, diag({sc(1)}), zero(1));
        WDRep q(5, diag({mono(5, 2)}), zero(1));
        REQUIRE_FALSE(congruent_wd(one, q, ctx));
    }

    SECTION("non-semisimple unramified input reduces through its spectrum") {
        WDRep u(5, mat(2, {sc(1), sc(1), sc(0), sc(1)}), zero(2));
        WDRep i2(5, diag({sc(1), sc(1)}), zero(2));
        REQUIRE(congruent_wd(u, i2, ctx));
    }

    SECTION("errors") {
        WDRep nonunit(5, diag({sc(3)}), zero(1));
        REQUIRE_THROWS_AS(reduce_wd(nonunit, ctx), modl::not_integral_error);

        WDRep a(5, diag({sc(1)}), zero(1));
        WDRep b2(5, diag({sc(1), sc(1)}), zero(2));
        REQUIRE_THROWS_AS(congruent_wd(a, b2, ctx), modl::shape_mismatch_error);

        WDRep c7(7, diag({sc(1)}), zero(1));
        REQUIRE_THROWS_AS(congruent_wd(a, c7, ctx), modl::shape_mismatch_error);

        Matrix<CoeffElem> e12(2);
        e12.at(0, 1) = sc(1);
        WDRep ramified(5, diag({sc(1), mono(5, 2)}), e12);
        REQUIRE_THROWS_AS(reduce_wd(ramified, ctx), modl::domain_error);
    }

    SECTION("congruent_wd matches congruent_mod_ell on transfers") {
        std::mt19937 rng(555);
        GroupType g(GroupKind::so_odd, 2, 5);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<UnramifiedCharacter> c1, c2;
            for (int i = 0; i < g.rank(); ++i) {
                c1.push_back(UnramifiedCharacter(mono(5, static_cast<int>(rng() % 7) - 3)));
                c2.push_back(UnramifiedCharacter(mono(5, static_cast<int>(rng() % 7) - 3)));
            }
            GLParam t1 = transfer(SatakeParam(g, std::move(c1)));
            GLParam t2 = transfer(SatakeParam(g, std::move(c2)));
            REQUIRE(congruent_wd(wd_of_glparam(t1), wd_of_glparam(t2), ctx) ==
                    congruent_mod_ell(t1, t2, ctx));
        }
    }
}
