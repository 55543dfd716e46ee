#pragma once

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modl/existence.hpp"
#include "modl/globalize.hpp"
#include "modl/hilbert.hpp"
#include "modl/json_io.hpp"
#include "modl/smallfield.hpp"

namespace modl {

// Malformed invocation: unknown subcommand or flag, missing value, bad
// numeric literal, or an ill-shaped JSON payload.  Maps to exit status 2.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Invocation {
    std::string subcommand;
    std::map<std::string, std::string> args;
    bool io_stdin = false;  // payload flags were merged from a stdin JSON object
};

struct CliResult {
    std::string output;
    int exit_code = 0;
};

namespace clidetail {

enum class FlagKind { integer, rational, nonzero_rational, place, json, text, boolean };

struct FlagSpec {
    FlagKind kind = FlagKind::text;
    bool required = false;
};

using FlagTable = std::map<std::string, FlagSpec>;

inline const std::map<std::string, FlagTable>& command_table() {
    static const std::map<std::string, FlagTable> table = {
        {"hilbert",
         {{"a", {FlagKind::nonzero_rational, true}},
          {"b", {FlagKind::nonzero_rational, false}},
          {"p", {FlagKind::place, false}},
          {"legendre", {FlagKind::boolean, false}}}},
        {"profile",
         {{"form", {FlagKind::json, true}}, {"p", {FlagKind::place, false}}}},
        {"equivalent",
         {{"form1", {FlagKind::json, true}},
          {"form2", {FlagKind::json, true}},
          {"p", {FlagKind::place, false}}}},
        {"classify",
         {{"form", {FlagKind::json, false}},
          {"p", {FlagKind::place, true}},
          {"parity", {FlagKind::text, false}},
          {"n", {FlagKind::integer, false}},
          {"delta", {FlagKind::rational, false}},
          {"alpha", {FlagKind::rational, false}}}},
        {"exists",
         {{"kind", {FlagKind::text, true}},
          {"r", {FlagKind::integer, true}},
          {"n", {FlagKind::integer, true}},
          {"delta-nonstandard", {FlagKind::boolean, false}}}},
        {"globalize",
         {{"kind", {FlagKind::text, false}},
          {"dim", {FlagKind::integer, false}},
          {"disc", {FlagKind::rational, false}},
          {"hasse", {FlagKind::integer, false}},
          {"place", {FlagKind::place, false}},
          {"global-disc", {FlagKind::rational, false}},
          {"n", {FlagKind::integer, false}},
          {"alpha", {FlagKind::rational, false}},
          {"sign", {FlagKind::integer, false}}}},
        {"check-cert", {{"cert", {FlagKind::json, true}}}},
        {"aux-place", {{"cert", {FlagKind::json, true}}}},
        {"realize", {{"cert", {FlagKind::json, true}}}},
        {"transfer",
         {{"group", {FlagKind::text, true}},
          {"q", {FlagKind::integer, true}},
          {"chars", {FlagKind::json, false}},
          {"modulus-exponents", {FlagKind::integer, false}}}},
        {"charpoly", {{"param", {FlagKind::json, true}}}},
        {"integral",
         {{"ell", {FlagKind::integer, true}},
          {"param", {FlagKind::json, false}},
          {"group", {FlagKind::text, false}},
          {"q", {FlagKind::integer, false}},
          {"chars", {FlagKind::json, false}},
          {"value", {FlagKind::nonzero_rational, false}}}},
        {"congruent",
         {{"ell", {FlagKind::integer, true}},
          {"param1", {FlagKind::json, false}},
          {"param2", {FlagKind::json, false}},
          {"rep1", {FlagKind::json, false}},
          {"rep2", {FlagKind::json, false}}}},
        {"support",
         {{"group", {FlagKind::text, true}},
          {"q", {FlagKind::integer, true}},
          {"chars1", {FlagKind::json, true}},
          {"chars2", {FlagKind::json, true}},
          {"ell", {FlagKind::integer, true}}}},
        {"flip",
         {{"param", {FlagKind::json, true}},
          {"group", {FlagKind::text, false}},
          {"q", {FlagKind::integer, false}},
          {"twist", {FlagKind::rational, false}}}},
        {"base-change",
         {{"param", {FlagKind::json, false}},
          {"f", {FlagKind::integer, false}},
          {"d", {FlagKind::integer, false}},
          {"q", {FlagKind::integer, false}},
          {"k", {FlagKind::integer, false}}}},
        {"so2",
         {{"q", {FlagKind::integer, true}}, {"char", {FlagKind::json, true}}}},
        {"wd-validate", {{"rep", {FlagKind::json, true}}}},
        {"wd-ss",
         {{"rep", {FlagKind::json, false}},
          {"param", {FlagKind::json, false}},
          {"as-param", {FlagKind::boolean, false}}}},
        {"wd-reduce",
         {{"rep", {FlagKind::json, true}},
          {"ell", {FlagKind::integer, true}},
          {"model", {FlagKind::boolean, false}}}},
        {"green",
         {{"q", {FlagKind::integer, true}},
          {"k", {FlagKind::integer, true}},
          {"class", {FlagKind::json, false}},
          {"regular", {FlagKind::boolean, false}},
          {"xi2", {FlagKind::integer, false}},
          {"ell", {FlagKind::integer, false}},
          {"length", {FlagKind::boolean, false}}}},
        {"kloosterman",
         {{"q", {FlagKind::integer, true}},
          {"u", {FlagKind::json, true}},
          {"a", {FlagKind::integer, true}}}},
        {"simple-orbits",
         {{"p", {FlagKind::integer, false}},
          {"q", {FlagKind::integer, true}},
          {"n", {FlagKind::integer, false}},
          {"enumerate", {FlagKind::boolean, false}},
          {"tuple", {FlagKind::json, false}},
          {"chi", {FlagKind::json, false}}}},
        {"selfdual-params",
         {{"q", {FlagKind::integer, true}}, {"r", {FlagKind::integer, true}}}},
        {"repro",
         {{"scenario", {FlagKind::text, true}},
          {"q", {FlagKind::integer, false}},
          {"ell", {FlagKind::integer, false}}}},
    };
    return table;
}

inline void check_flag_value(const std::string& sub, const std::string& flag, FlagKind kind,
                             const std::string& value) {
    try {
        switch (kind) {
            case FlagKind::integer: parse_int(value); break;
            case FlagKind::rational: parse_rational(value); break;
            case FlagKind::nonzero_rational:
                if (parse_rational(value) == 0)
                    throw usage_error(sub + ": flag --" + flag + " must be nonzero");
                break;
            case FlagKind::place: Place::parse(value); break;
            case FlagKind::json: {
                Json j = Json::parse(value, nullptr, false);
                if (j.is_discarded())
                    throw usage_error(sub + ": flag --" + flag + " is not valid JSON");
                break;
            }
            case FlagKind::text:
            case FlagKind::boolean: break;
        }
    } catch (const error& e) {
        throw usage_error(sub + ": flag --" + flag + ": " + e.what());
    }
}

inline std::string strip_dashes(const std::string& token) {
    std::size_t i = 0;
    while (i < token.size() && i < 2 && token[i] == '-') ++i;
    return token.substr(i);
}

inline bool looks_like_flag(const std::string& token) {
    if (token.size() < 2 || token[0] != '-') return false;
    char c = token[1];
    return !(c >= '0' && c <= '9');
}

// ---- execute-side flag accessors (repeat the parse with usage diagnostics
// so values merged from stdin get the same checks) ----

inline const std::string& flag_raw(const Invocation& inv, const std::string& name) {
    auto it = inv.args.find(name);
    if (it == inv.args.end())
        throw usage_error(inv.subcommand + ": missing required flag --" + name);
    return it->second;
}

inline bool flag_present(const Invocation& inv, const std::string& name) {
    return inv.args.find(name) != inv.args.end();
}

template <typename F>
auto flag_parse(const Invocation& inv, const std::string& name, F&& f) {
    try {
        return f(flag_raw(inv, name));
    } catch (const usage_error&) {
        throw;
    } catch (const error& e) {
        throw usage_error(inv.subcommand + ": flag --" + name + ": " + e.what());
    }
}

inline std::int64_t flag_i64(const Invocation& inv, const std::string& name) {
    return flag_parse(inv, name, [](const std::string& s) {
        Int v = parse_int(s);
        if (v > 1000000000000000LL || v < -1000000000000000LL)
            throw domain_error("integer flag out of range");
        return static_cast<std::int64_t>(v);
    });
}

inline int flag_int(const Invocation& inv, const std::string& name) {
    std::int64_t v = flag_i64(inv, name);
    if (v > 1000000000 || v < -1000000000)
        throw usage_error(inv.subcommand + ": flag --" + name + " out of range");
    return static_cast<int>(v);
}

inline Int flag_bigint(const Invocation& inv, const std::string& name) {
    return flag_parse(inv, name, [](const std::string& s) { return parse_int(s); });
}

inline Rational flag_rational(const Invocation& inv, const std::string& name) {
    return flag_parse(inv, name, [](const std::string& s) { return parse_rational(s); });
}

inline Place flag_place(const Invocation& inv, const std::string& name) {
    return flag_parse(inv, name, [](const std::string& s) { return Place::parse(s); });
}

inline Json flag_json(const Invocation& inv, const std::string& name) {
    Json j = Json::parse(flag_raw(inv, name), nullptr, false);
    if (j.is_discarded())
        throw usage_error(inv.subcommand + ": flag --" + name + " is not valid JSON");
    return j;
}

inline void require_exactly_one(const Invocation& inv, std::vector<std::string> present_names,
                                const std::string& choices) {
    if (present_names.size() != 1)
        throw usage_error(inv.subcommand + ": give exactly one of " + choices);
}

// ---- subcommand bodies ----

inline Json exec_hilbert(const Invocation& inv) {
    Json out = Json::object();
    if (flag_present(inv, "legendre")) {
        Int a = flag_bigint(inv, "a");
        Place p = flag_place(inv, "p");
        if (!p.is_finite()) throw usage_error("hilbert: --legendre needs an odd prime -p");
        out["symbol"] = legendre_symbol(a, p.prime());
        return out;
    }
    Rational a = flag_rational(inv, "a");
    Rational b = flag_rational(inv, "b");
    if (flag_present(inv, "p")) {
        out["symbol"] = hilbert_symbol(a, b, flag_place(inv, "p"));
        return out;
    }
    Json places = Json::array();
    for (const Place& v : hilbert_reciprocity_support(a, b)) places.push_back(v.str());
    out["places"] = std::move(places);
    return out;
}

inline Json exec_profile(const Invocation& inv) {
    DiagQuadForm f = form_from(flag_json(inv, "form"), "form");
    Json out = Json::object();
    if (flag_present(inv, "p")) {
        out["profile"] = profile_json(local_profile(f, flag_place(inv, "p")));
        return out;
    }
    Json profiles = Json::array();
    for (const Place& v : symbol_support(f)) profiles.push_back(profile_json(local_profile(f, v)));
    out["profiles"] = std::move(profiles);
    return out;
}

inline Json exec_equivalent(const Invocation& inv) {
    DiagQuadForm f = form_from(flag_json(inv, "form1"), "form1");
    DiagQuadForm g = form_from(flag_json(inv, "form2"), "form2");
    Json out = Json::object();
    out["equivalent"] = flag_present(inv, "p")
                            ? locally_equivalent(f, g, flag_place(inv, "p"))
                            : globally_equivalent(f, g);
    return out;
}

inline Json exec_classify(const Invocation& inv) {
    Place v = flag_place(inv, "p");
    Json out = Json::object();
    if (flag_present(inv, "form")) {
        SOClassification c =
            classify_so_local(form_from(flag_json(inv, "form"), "form"), v);
        out["alpha"] = format_rational(c.alpha);
        out["class"] = so_class_name(c.kind);
        out["n"] = c.n;
        out["parity"] = form_kind_name(c.parity);
        return out;
    }
    std::string parity = flag_raw(inv, "parity");
    int n = flag_int(inv, "n");
    Rational delta = flag_rational(inv, "delta");
    if (parity == "hermitian")
        out["hasse"] = hermitian_trace_hasse(n, flag_rational(inv, "alpha"), delta, v);
    else
        out["hasse"] = split_so_hasse(parse_form_kind(parity), n, delta, v);
    return out;
}

inline Json exec_exists(const Invocation& inv) {
    FormKind kind = parse_form_kind(flag_raw(inv, "kind"));
    ExistenceDecision d = exists_definite_quasisplit(kind, flag_int(inv, "r"), flag_int(inv, "n"),
                                                     !flag_present(inv, "delta-nonstandard"));
    Json out = Json::object();
    out["exists"] = d.exists;
    out["reason"] = d.reason;
    return out;
}

inline CliResult obstruction_result(const ObstructionReport& rep) {
    Json out = Json::object();
    out["error"] = "Obstruction";
    out["message"] = rep.reason;
    out["minimal_r"] = rep.minimal_r;
    return {out.dump(), 1};
}

inline CliResult exec_globalize(const Invocation& inv) {
    std::string kind = flag_present(inv, "kind") ? flag_raw(inv, "kind") : "quadratic";
    GlobalizeResult res = [&] {
        if (kind == "quadratic") {
            LocalProfile target;
            target.place = flag_place(inv, "place");
            target.dim = flag_int(inv, "dim");
            target.disc_rep = flag_rational(inv, "disc");
            target.hasse = flag_int(inv, "hasse");
            return globalize_quadratic(target, flag_rational(inv, "global-disc"));
        }
        if (kind == "hermitian") {
            std::optional<int> sign;
            if (flag_present(inv, "sign")) sign = flag_int(inv, "sign");
            return globalize_hermitian(flag_int(inv, "n"), flag_rational(inv, "alpha"),
                                       flag_place(inv, "place"), sign);
        }
        throw usage_error("globalize: --kind must be quadratic or hermitian");
    }();
    if (const auto* rep = std::get_if<ObstructionReport>(&res)) return obstruction_result(*rep);
    Json out = Json::object();
    out["certificate"] = cert_json(std::get<GlobalCertificate>(res));
    return {out.dump(), 0};
}

inline Json exec_check_cert(const Invocation& inv) {
    CheckResult r = certificate_check(cert_from(flag_json(inv, "cert")));
    Json out = Json::object();
    out["detail"] = r.detail;
    out["ok"] = r.ok;
    return out;
}

inline Json exec_aux_place(const Invocation& inv) {
    Json out = Json::object();
    out["place"] = find_auxiliary_split_place(cert_from(flag_json(inv, "cert"))).str();
    return out;
}

inline Json exec_realize(const Invocation& inv) {
    Json out = Json::object();
    out["form"] = form_json(realize_form(cert_from(flag_json(inv, "cert"))));
    return out;
}

inline Json exec_transfer(const Invocation& inv) {
    GroupType g = GroupType::parse(flag_raw(inv, "group"), flag_i64(inv, "q"));
    Json out = Json::object();
    if (flag_present(inv, "modulus-exponents")) {
        Json exps = Json::array();
        for (const Rational& e : modulus_exponents(g, flag_int(inv, "modulus-exponents")))
            exps.push_back(format_rational(e));
        out["exponents"] = std::move(exps);
        return out;
    }
    SatakeParam p(g, chars_from(flag_json(inv, "chars"), g.target_q(), "chars"));
    out["param"] = glparam_json(transfer(p));
    return out;
}

inline Json exec_charpoly(const Invocation& inv) {
    GLParam t = glparam_from(flag_json(inv, "param"));
    Json cs = Json::array();
    for (const CoeffElem& c : charpoly(t)) cs.push_back(coeff_json(c));
    Json out = Json::object();
    out["coefficients"] = std::move(cs);  // leading coefficient first
    out["selfdual"] = is_selfdual(t);
    return out;
}

inline Json exec_integral(const Invocation& inv) {
    Int ell = flag_bigint(inv, "ell");
    Json out = Json::object();
    if (flag_present(inv, "value")) {
        out["valuation"] = ell_adic_valuation(flag_rational(inv, "value"), ell);
        return out;
    }
    if (flag_present(inv, "param")) {
        out["integral"] = is_integral(glparam_from(flag_json(inv, "param")), ell);
        return out;
    }
    GroupType g = GroupType::parse(flag_raw(inv, "group"), flag_i64(inv, "q"));
    SatakeParam p(g, chars_from(flag_json(inv, "chars"), g.target_q(), "chars"));
    out["integral"] = is_integral(p, ell);
    return out;
}

inline Json exec_congruent(const Invocation& inv) {
    bool params = flag_present(inv, "param1") || flag_present(inv, "param2");
    bool reps = flag_present(inv, "rep1") || flag_present(inv, "rep2");
    if (params == reps)
        throw usage_error("congruent: give either --param1/--param2 or --rep1/--rep2");
    std::int64_t ell = flag_i64(inv, "ell");
    Json out = Json::object();
    if (params) {
        GLParam a = glparam_from(flag_json(inv, "param1"));
        GLParam b = glparam_from(flag_json(inv, "param2"));
        out["congruent"] = congruent_mod_ell(a, b, build_reduction_context(ell, a.q_target));
    } else {
        WDRep a = wd_from(flag_json(inv, "rep1"));
        WDRep b = wd_from(flag_json(inv, "rep2"));
        out["congruent"] = congruent_wd(a, b, build_reduction_context(ell, a.q));
    }
    return out;
}

inline Json exec_support(const Invocation& inv) {
    GroupType g = GroupType::parse(flag_raw(inv, "group"), flag_i64(inv, "q"));
    SatakeParam p1(g, chars_from(flag_json(inv, "chars1"), g.target_q(), "chars1"));
    SatakeParam p2(g, chars_from(flag_json(inv, "chars2"), g.target_q(), "chars2"));
    ReductionContext ctx = build_reduction_context(flag_i64(inv, "ell"), g.target_q());
    Json out = Json::object();
    out["same_support"] = same_support_mod_ell(p1, p2, ctx);
    return out;
}

inline Json exec_flip(const Invocation& inv) {
    GLParam t = glparam_from(flag_json(inv, "param"));
    Json out = Json::object();
    if (flag_present(inv, "twist")) {
        out["param"] = glparam_json(det_twist(t, flag_rational(inv, "twist")));
        return out;
    }
    GroupType g = GroupType::parse(flag_raw(inv, "group"), flag_i64(inv, "q"));
    out["param"] = glparam_json(sqrt_flip(g, t));
    return out;
}

inline Json exec_base_change(const Invocation& inv) {
    Json out = Json::object();
    if (flag_present(inv, "param")) {
        GLParam t = glparam_from(flag_json(inv, "param"));
        int f = flag_int(inv, "f");
        int d = flag_present(inv, "d") ? flag_int(inv, "d") : f;
        out["param"] = glparam_json(unramified_base_change(t, f, d));
        return out;
    }
    std::int64_t q = flag_i64(inv, "q");
    if (q < 2 || q > 1000000) throw usage_error("base-change: --q out of range");
    CyclicExponent xi(Int(q) * q - 1, flag_bigint(inv, "k"));
    out["length"] = base_change_length(xi, q);
    return out;
}

inline Json exec_so2(const Invocation& inv) {
    std::int64_t q = flag_i64(inv, "q");
    UnramifiedCharacter ch(coeff_from(flag_json(inv, "char"), q, "char"));
    Json out = Json::object();
    out["param"] = glparam_json(so2_split_transfer(ch, q));
    return out;
}

inline Json exec_wd_validate(const Invocation& inv) {
    ValidationReport r = validate(wd_from(flag_json(inv, "rep")));
    Json out = Json::object();
    out["defects"] = r.defects;
    out["ok"] = r.ok;
    return out;
}

inline Json exec_wd_ss(const Invocation& inv) {
    Json out = Json::object();
    if (flag_present(inv, "param")) {
        if (flag_present(inv, "rep")) throw usage_error("wd-ss: give --rep or --param, not both");
        out["rep"] = wd_json(wd_of_glparam(glparam_from(flag_json(inv, "param"))));
        return out;
    }
    WDRep ss = frobenius_ss(wd_from(flag_json(inv, "rep")));
    if (flag_present(inv, "as-param")) {
        out["param"] = glparam_json(glparam_of_wd(ss));
        return out;
    }
    out["rep"] = wd_json(ss);
    return out;
}

inline Json exec_wd_reduce(const Invocation& inv) {
    WDRep w = wd_from(flag_json(inv, "rep"));
    std::int64_t ell = flag_i64(inv, "ell");
    Json out = Json::object();
    if (flag_present(inv, "model")) {
        IntegralModelResult r = integral_model(w, Int(ell));
        out["conjugator"] = matrix_json(r.conjugator);
        out["model"] = wd_json(r.model);
        out["valuation"] = r.valuation;
        return out;
    }
    ReductionContext ctx = build_reduction_context(ell, w.q);
    Json classes = Json::array();
    for (const FiniteFieldElem& x : reduce_wd(w, ctx)) classes.push_back(ffelem_json(x));
    out["classes"] = std::move(classes);
    out["degree"] = ctx.degree();
    out["ell"] = ell;
    return out;
}

inline Json exec_green(const Invocation& inv) {
    std::int64_t q = flag_i64(inv, "q");
    if (q < 2 || q > 40000) throw usage_error("green: --q out of range");
    CyclicExponent xi(Int(q) * q - 1, flag_bigint(inv, "k"));
    std::vector<std::string> modes;
    for (const char* m : {"class", "regular", "xi2", "length"})
        if (flag_present(inv, m)) modes.emplace_back(m);
    require_exactly_one(inv, modes, "--class, --regular, --xi2/--ell, --length");
    Json out = Json::object();
    if (modes[0] == "class") {
        out["value"] = cycsum_json(green_character_value(xi, q, gl2class_from(flag_json(inv, "class"))));
    } else if (modes[0] == "regular") {
        out["regular"] = is_regular_green(xi, q);
    } else if (modes[0] == "xi2") {
        CyclicExponent xi2(Int(q) * q - 1, flag_bigint(inv, "xi2"));
        out["congruent"] = congruent_green(xi, xi2, flag_bigint(inv, "ell"));
    } else {
        out["length"] = base_change_length(xi, q);
    }
    return out;
}

inline Json exec_kloosterman(const Invocation& inv) {
    std::int64_t q = flag_i64(inv, "q");
    SmallField F = SmallField::of_order(q);
    std::vector<int> u = int_tuple_from(flag_json(inv, "u"), "u");
    Json out = Json::object();
    out["value"] = kloosterman_value(F, u, flag_int(inv, "a"));
    return out;
}

inline Json exec_simple_orbits(const Invocation& inv) {
    std::int64_t q = flag_i64(inv, "q");
    SmallField F = SmallField::of_order(q);
    Json out = Json::object();
    if (flag_present(inv, "tuple")) {
        std::vector<int> u = int_tuple_from(flag_json(inv, "tuple"), "tuple");
        if (flag_present(inv, "chi")) {
            std::vector<int> chi = int_tuple_from(flag_json(inv, "chi"), "chi");
            out["image"] = int_tuple_json(iwahori_conjugation_action(F, chi, u));
            return out;
        }
        out["normal_form"] = simple_cuspidal_normal_form(F, u);
        return out;
    }
    std::int64_t p = flag_present(inv, "p") ? flag_i64(inv, "p") : F.p();
    int n = flag_int(inv, "n");
    Int count = count_simple_cuspidals(p, q, n);
    out["count"] = static_cast<std::int64_t>(count);
    if (flag_present(inv, "enumerate")) {
        if (p != 2) throw usage_error("simple-orbits: --enumerate needs residue characteristic 2");
        Json orbits = Json::array();
        for (const std::vector<int>& rep : simple_cuspidal_orbit_reps(F, n)) {
            Json o = Json::object();
            o["normal_form"] = simple_cuspidal_normal_form(F, rep);
            o["tuple"] = int_tuple_json(rep);
            orbits.push_back(std::move(o));
        }
        out["orbits"] = std::move(orbits);
    }
    return out;
}

inline Json exec_selfdual_params(const Invocation& inv) {
    std::int64_t q = flag_i64(inv, "q");
    int r = flag_int(inv, "r");
    std::vector<CyclicExponent> params = selfdual_cuspidal_params(q, r);
    SmallField base = SmallField::of_order(q);
    SmallField F(base.p(), 2 * r * base.degree());
    Json out = Json::object();
    out["modulus"] = F.q() - 1;
    Json arr = Json::array();
    for (const CyclicExponent& xi : params) {
        Json o = Json::object();
        Json cp = Json::array();
        for (int c : selfdual_charpoly(F, base.degree(), xi.exponent)) cp.push_back(c);
        o["charpoly"] = std::move(cp);
        o["exponent"] = static_cast<std::int64_t>(xi.exponent);
        arr.push_back(std::move(o));
    }
    out["params"] = std::move(arr);
    return out;
}

// ---- scripted reproduction scenarios ----

inline Json repro_remark_6_4(std::int64_t q, std::int64_t ell) {
    GroupType g(GroupKind::so_odd, 2, q);
    auto mono = [&](int k, const Rational& c) {
        return UnramifiedCharacter(CoeffElem::monomial(q, k, c));
    };
    SatakeParam p1(g, {mono(-1, Rational(1)), mono(1, Rational(1))});
    SatakeParam p2(g, {mono(3, Rational(1)), mono(1, Rational(1))});
    ReductionContext ctx = build_reduction_context(ell, q);
    GLParam t1 = transfer(p1), t2 = transfer(p2);
    bool same = same_support_mod_ell(p1, p2, ctx);
    bool congruent = congruent_mod_ell(t1, t2, ctx);
    bool equal = t1 == t2;
    Json out = Json::object();
    out["congruent_transfers"] = congruent;
    out["params_equal"] = equal;
    out["pass"] = congruent && !equal && same;
    return out;
}

inline Json repro_so2(std::int64_t q, std::int64_t ell) {
    UnramifiedCharacter c1(CoeffElem::monomial(q, 1, Rational(1)));    // q^{1/2}
    UnramifiedCharacter c2(CoeffElem::monomial(q, -1, Rational(-1)));  // -q^{-1/2}
    ReductionContext ctx = build_reduction_context(ell, q);
    bool chars_equal = reduce_coeff(c1.value, ctx) == reduce_coeff(c2.value, ctx);
    GLParam t1 = so2_split_transfer(c1, q), t2 = so2_split_transfer(c2, q);
    bool degenerate = t1.degenerate_character.has_value() && t2.degenerate_character.has_value();
    bool differ = degenerate && reduce_coeff(t1.degenerate_character->value, ctx) !=
                                    reduce_coeff(t2.degenerate_character->value, ctx);
    Json out = Json::object();
    out["chars_reduce_equal"] = chars_equal;
    out["degenerate_both"] = degenerate;
    out["degenerate_reductions_differ"] = differ;
    out["pass"] = chars_equal && degenerate && differ;
    return out;
}

inline Json repro_kloosterman_odd() {
    std::int64_t checked = 0;
    bool all_odd = true;
    auto check = [&](const SmallField& F, const std::vector<int>& u, int a, std::int64_t bound) {
        std::int64_t v = kloosterman_value(F, u, a);
        ++checked;
        if (v % 2 == 0 || v > bound || v < -bound) all_odd = false;
    };
    SmallField f2(2, 1);
    for (int n = 1; n <= 6; ++n) check(f2, std::vector<int>(n + 1, 1), 1, 1);
    SmallField f4(2, 2);
    for (int n = 1; n <= 2; ++n) {
        std::int64_t bound = 1;
        for (int i = 0; i < n; ++i) bound *= 3;
        std::vector<int> u(n + 1, 1);
        while (true) {
            for (int a = 1; a <= 3; ++a) check(f4, u, a, bound);
            std::size_t i = 0;
            while (i < u.size() && u[i] == 3) u[i++] = 1;
            if (i == u.size()) break;
            ++u[i];
        }
    }
    Json out = Json::object();
    out["all_odd"] = all_odd;
    out["checked"] = checked;
    out["pass"] = all_odd;
    return out;
}

inline Json exec_repro(const Invocation& inv) {
    const std::string& scenario = flag_raw(inv, "scenario");
    if (scenario == "remark-6.4") return repro_remark_6_4(flag_i64(inv, "q"), flag_i64(inv, "ell"));
    if (scenario == "so2") return repro_so2(flag_i64(inv, "q"), flag_i64(inv, "ell"));
    if (scenario == "kloosterman-odd") return repro_kloosterman_odd();
    throw usage_error("repro: unknown scenario '" + scenario +
                      "' (expected remark-6.4, so2, or kloosterman-odd)");
}

}  // namespace clidetail

// Tokens are everything after the program name.  The first token names the
// subcommand; `repro` also takes a bare scenario name.  Every other token is
// a --flag (or -f) followed by a value, except boolean flags.
inline Invocation parse_invocation(const std::vector<std::string>& tokens) {
    using namespace clidetail;
    if (tokens.empty()) throw usage_error("no subcommand given");
    Invocation inv;
    inv.subcommand = tokens[0];
    const auto& table = command_table();
    auto sub = table.find(inv.subcommand);
    if (sub == table.end()) throw usage_error("unknown subcommand '" + inv.subcommand + "'");
    const FlagTable& flags = sub->second;

    std::size_t i = 1;
    if (inv.subcommand == "repro") {
        if (i < tokens.size() && !looks_like_flag(tokens[i])) inv.args["scenario"] = tokens[i++];
    }
    for (; i < tokens.size(); ++i) {
        if (!looks_like_flag(tokens[i]))
            throw usage_error(inv.subcommand + ": expected a flag, got '" + tokens[i] + "'");
        std::string name = strip_dashes(tokens[i]);
        if (name == "stdin") {
            inv.io_stdin = true;
            continue;
        }
        auto spec = flags.find(name);
        if (spec == flags.end())
            throw usage_error(inv.subcommand + ": unknown flag --" + name);
        if (inv.args.count(name))
            throw usage_error(inv.subcommand + ": duplicate flag --" + name);
        if (spec->second.kind == FlagKind::boolean) {
            inv.args[name] = "true";
            continue;
        }
        if (i + 1 >= tokens.size())
            throw usage_error(inv.subcommand + ": flag --" + name + " needs a value");
        inv.args[name] = tokens[++i];
    }

    for (const auto& [name, spec] : flags) {
        auto it = inv.args.find(name);
        if (it == inv.args.end()) {
            // Required flags may still arrive via a stdin payload; execute
            // re-checks them after the merge.
            if (spec.required && !inv.io_stdin)
                throw usage_error(inv.subcommand + ": missing required flag --" + name);
            continue;
        }
        if (spec.kind != FlagKind::boolean)
            check_flag_value(inv.subcommand, name, spec.kind, it->second);
    }
    return inv;
}

inline CliResult execute(const Invocation& inv) {
    using namespace clidetail;
    try {
        if (inv.subcommand == "globalize") return exec_globalize(inv);
        Json out;
        if (inv.subcommand == "hilbert") out = exec_hilbert(inv);
        else if (inv.subcommand == "profile") out = exec_profile(inv);
        else if (inv.subcommand == "equivalent") out = exec_equivalent(inv);
        else if (inv.subcommand == "classify") out = exec_classify(inv);
        else if (inv.subcommand == "exists") out = exec_exists(inv);
        else if (inv.subcommand == "check-cert") out = exec_check_cert(inv);
        else if (inv.subcommand == "aux-place") out = exec_aux_place(inv);
        else if (inv.subcommand == "realize") out = exec_realize(inv);
        else if (inv.subcommand == "transfer") out = exec_transfer(inv);
        else if (inv.subcommand == "charpoly") out = exec_charpoly(inv);
        else if (inv.subcommand == "integral") out = exec_integral(inv);
        else if (inv.subcommand == "congruent") out = exec_congruent(inv);
        else if (inv.subcommand == "support") out = exec_support(inv);
        else if (inv.subcommand == "flip") out = exec_flip(inv);
        else if (inv.subcommand == "base-change") out = exec_base_change(inv);
        else if (inv.subcommand == "so2") out = exec_so2(inv);
        else if (inv.subcommand == "wd-validate") out = exec_wd_validate(inv);
        else if (inv.subcommand == "wd-ss") out = exec_wd_ss(inv);
        else if (inv.subcommand == "wd-reduce") out = exec_wd_reduce(inv);
        else if (inv.subcommand == "green") out = exec_green(inv);
        else if (inv.subcommand == "kloosterman") out = exec_kloosterman(inv);
        else if (inv.subcommand == "simple-orbits") out = exec_simple_orbits(inv);
        else if (inv.subcommand == "selfdual-params") out = exec_selfdual_params(inv);
        else if (inv.subcommand == "repro") out = exec_repro(inv);
        else throw usage_error("unknown subcommand '" + inv.subcommand + "'");
        return {out.dump(), 0};
    } catch (const json_shape_error& e) {
        throw usage_error(inv.subcommand + ": " + e.what());
    } catch (const error& e) {
        Json out = Json::object();
        out["error"] = e.code();
        out["message"] = e.what();
        return {out.dump(), 1};
    }
}

// `--stdin` merges one JSON object of flag -> value pairs read from standard
// input into the invocation (command-line flags win on conflicts).
inline std::vector<std::string> merge_stdin_payload(std::vector<std::string> tokens,
                                                    const std::string& payload) {
    Json j = Json::parse(payload, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw usage_error("stdin payload must be a JSON object of flag/value pairs");
    std::set<std::string> present;
    for (const std::string& t : tokens)
        if (clidetail::looks_like_flag(t)) present.insert(clidetail::strip_dashes(t));
    for (const auto& [key, val] : j.items()) {
        if (present.count(key)) continue;
        if (val.is_boolean()) {
            if (val.get<bool>()) tokens.push_back("--" + key);
            continue;
        }
        tokens.push_back("--" + key);
        tokens.push_back(val.is_string() ? val.get<std::string>() : val.dump());
    }
    return tokens;
}

inline CliResult run_tokens(std::vector<std::string> tokens, const std::string& stdin_text = "") {
    try {
        bool wants_stdin = false;
        for (const std::string& t : tokens)
            if (t == "--stdin") wants_stdin = true;
        if (wants_stdin) {
            tokens.erase(std::remove(tokens.begin(), tokens.end(), std::string("--stdin")),
                         tokens.end());
            tokens = merge_stdin_payload(std::move(tokens), stdin_text);
        }
        Invocation inv = parse_invocation(tokens);
        inv.io_stdin = wants_stdin;
        return execute(inv);
    } catch (const usage_error& e) {
        Json out = Json::object();
        out["error"] = "Usage";
        out["message"] = e.what();
        return {out.dump(), 2};
    }
}

inline int run_cli(int argc, char** argv) {
    std::vector<std::string> tokens(argv + 1, argv + argc);
    std::string stdin_text;
    for (const std::string& t : tokens)
        if (t == "--stdin") {
            std::ostringstream buf;
            buf << std::cin.rdbuf();
            stdin_text = buf.str();
            break;
        }
    CliResult r = run_tokens(std::move(tokens), stdin_text);
    std::cout << r.output << "\n";
    return r.exit_code;
}

}  // namespace modl
