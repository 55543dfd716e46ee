#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "modl/certificate.hpp"
#include "modl/coeff.hpp"
#include "modl/cyclotomic.hpp"
#include "modl/error.hpp"
#include "modl/finite_field.hpp"
#include "modl/finite_reps.hpp"
#include "modl/matrix.hpp"
#include "modl/place.hpp"
#include "modl/quadform.hpp"
#include "modl/rational.hpp"
#include "modl/satake.hpp"
#include "modl/weil_deligne.hpp"

namespace modl {

// nlohmann::json keeps object keys in std::map order, which is exactly the
// canonical (sorted-key) form the CLI emits.
using Json = nlohmann::json;

// A payload that is syntactically valid JSON but has the wrong shape for the
// requested operation.  The CLI reports these as usage errors (exit 2),
// unlike modl::error which signals a domain failure (exit 1).
struct json_shape_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const Json& need(const Json& j, const char* key) {
    if (!j.is_object()) throw json_shape_error("expected a JSON object with field '" +
                                               std::string(key) + "'");
    auto it = j.find(key);
    if (it == j.end()) throw json_shape_error("missing field '" + std::string(key) + "'");
    return *it;
}

inline std::string need_string(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_string()) throw json_shape_error("field '" + std::string(key) + "' must be a string");
    return v.get<std::string>();
}

inline std::int64_t need_integer(const Json& j, const char* key) {
    const Json& v = need(j, key);
    if (!v.is_number_integer())
        throw json_shape_error("field '" + std::string(key) + "' must be an integer");
    return v.get<std::int64_t>();
}

// Rationals travel as canonical "n" / "n/d" strings; bare JSON integers are
// accepted on input as a convenience.  Floats are rejected everywhere.
inline Rational rational_from(const Json& v, const std::string& what) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (!v.is_string())
        throw json_shape_error(what + " must be an exact rational string like \"3\" or \"-1/2\"");
    return parse_rational(v.get<std::string>());
}

// ---- coefficient ring: Laurent terms in the formal square root of q ----

inline Json coeff_json(const CoeffElem& x) {
    Json o = Json::object();
    for (const auto& [k, c] : x.terms()) o[std::to_string(k)] = format_rational(c);
    return o;
}

inline CoeffElem coeff_from(const Json& v, std::int64_t q, const std::string& what) {
    if (v.is_string() || v.is_number_integer())
        return CoeffElem::monomial(q, 0, rational_from(v, what));
    if (!v.is_object())
        throw json_shape_error(what + " must map half-exponents to rational strings");
    std::map<int, Rational> terms;
    for (const auto& [key, val] : v.items()) {
        Int e = parse_int(key);
        if (e > 1000000 || e < -1000000) throw json_shape_error(what + ": exponent out of range");
        terms[static_cast<int>(e)] = rational_from(val, what);
    }
    return CoeffElem(q, std::move(terms));
}

inline Json matrix_json(const Matrix<CoeffElem>& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.dim(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.dim(); ++j) row.push_back(coeff_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix<CoeffElem> matrix_from(const Json& v, std::int64_t q, const std::string& what) {
    if (!v.is_array() || v.empty()) throw json_shape_error(what + " must be a non-empty array of rows");
    int n = static_cast<int>(v.size());
    Matrix<CoeffElem> m(n);
    for (int i = 0; i < n; ++i) {
        const Json& row = v.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw json_shape_error(what + " must be square");
        for (int j = 0; j < n; ++j)
            m.at(i, j) = coeff_from(row.at(j), q, what + " entry");
    }
    return m;
}

// ---- quadratic forms and local profiles ----

inline Json form_json(const DiagQuadForm& f) {
    Json a = Json::array();
    for (const Rational& c : f.coeffs) a.push_back(format_rational(c));
    return a;
}

inline DiagQuadForm form_from(const Json& v, const std::string& what) {
    if (!v.is_array()) throw json_shape_error(what + " must be an array of rational strings");
    std::vector<Rational> cs;
    for (const Json& e : v) cs.push_back(rational_from(e, what + " coefficient"));
    return DiagQuadForm(std::move(cs));
}

inline Json profile_json(const LocalProfile& p) {
    Json o = Json::object();
    o["dim"] = p.dim;
    o["disc"] = format_rational(p.disc_rep);
    o["hasse"] = p.hasse;
    o["place"] = p.place.str();
    if (p.signature) o["signature"] = Json::array({p.signature->first, p.signature->second});
    return o;
}

inline LocalProfile profile_from(const Json& v) {
    LocalProfile p;
    p.place = Place::parse(need_string(v, "place"));
    p.dim = static_cast<int>(need_integer(v, "dim"));
    p.disc_rep = rational_from(need(v, "disc"), "disc");
    p.hasse = static_cast<int>(need_integer(v, "hasse"));
    if (v.contains("signature")) {
        const Json& s = v.at("signature");
        if (!s.is_array() || s.size() != 2 || !s.at(0).is_number_integer() ||
            !s.at(1).is_number_integer())
            throw json_shape_error("signature must be a pair of integers");
        p.signature = std::make_pair(s.at(0).get<int>(), s.at(1).get<int>());
    }
    return p;
}

// ---- globalization certificates ----

inline Json cert_json(const GlobalCertificate& c) {
    Json o = Json::object();
    o["kind"] = cert_kind_name(c.kind);
    o["dim"] = c.dim_or_n;
    o["disc"] = format_rational(c.disc_class);
    Json support = Json::array();
    for (const Int& p : c.support) support.push_back(p.str());
    o["support"] = std::move(support);
    Json fd = Json::object();
    for (const auto& [p, sign] : c.finite_data) fd[p.str()] = sign;
    o["finite_data"] = std::move(fd);
    o["real_data"] = c.real_data;
    if (c.anchored) {
        Json a = Json::object();
        a["place"] = c.anchored->first.str();
        a["profile"] = profile_json(c.anchored->second);
        o["anchored"] = std::move(a);
    }
    return o;
}

inline GlobalCertificate cert_from(const Json& v) {
    GlobalCertificate c;
    c.kind = parse_cert_kind(need_string(v, "kind"));
    c.dim_or_n = static_cast<int>(need_integer(v, "dim"));
    c.disc_class = rational_from(need(v, "disc"), "disc");
    const Json& support = need(v, "support");
    if (!support.is_array()) throw json_shape_error("support must be an array of prime strings");
    for (const Json& p : support) {
        if (!p.is_string()) throw json_shape_error("support entries must be prime strings");
        c.support.push_back(parse_int(p.get<std::string>()));
    }
    const Json& fd = need(v, "finite_data");
    if (!fd.is_object()) throw json_shape_error("finite_data must be an object");
    for (const auto& [key, val] : fd.items()) {
        if (!val.is_number_integer())
            throw json_shape_error("finite_data values must be integer signs");
        c.finite_data[parse_int(key)] = val.get<int>();
    }
    c.real_data = static_cast<int>(need_integer(v, "real_data"));
    if (v.contains("anchored")) {
        const Json& a = v.at("anchored");
        c.anchored = std::make_pair(Place::parse(need_string(a, "place")),
                                    profile_from(need(a, "profile")));
    }
    return c;
}

// ---- unramified parameters ----

inline Json glparam_json(const GLParam& t) {
    Json o = Json::object();
    o["N"] = t.N;
    o["q"] = t.q_target;
    Json eig = Json::array();
    for (const CoeffElem& e : t.eigenvalues) eig.push_back(coeff_json(e));
    o["eigenvalues"] = std::move(eig);
    if (t.degenerate_character)
        o["degenerate_character"] = coeff_json(t.degenerate_character->value);
    return o;
}

inline GLParam glparam_from(const Json& v) {
    std::int64_t q = need_integer(v, "q");
    const Json& eig = need(v, "eigenvalues");
    if (!eig.is_array()) throw json_shape_error("eigenvalues must be an array");
    std::vector<CoeffElem> es;
    for (const Json& e : eig) es.push_back(coeff_from(e, q, "eigenvalue"));
    std::optional<UnramifiedCharacter> degen;
    if (v.contains("degenerate_character"))
        degen = UnramifiedCharacter(
            coeff_from(v.at("degenerate_character"), q, "degenerate_character"));
    GLParam t(q, std::move(es), std::move(degen));
    if (v.contains("N") && need_integer(v, "N") != t.N)
        throw json_shape_error("declared N disagrees with the eigenvalue count");
    return t;
}

inline std::vector<UnramifiedCharacter> chars_from(const Json& v, std::int64_t q_target,
                                                   const std::string& what) {
    if (!v.is_array()) throw json_shape_error(what + " must be an array of character values");
    std::vector<UnramifiedCharacter> out;
    for (const Json& e : v) out.emplace_back(coeff_from(e, q_target, what + " entry"));
    return out;
}

// ---- Weil-Deligne data ----

inline Json wd_json(const WDRep& w) {
    Json o = Json::object();
    o["q"] = w.q;
    o["frobenius"] = matrix_json(w.frobenius);
    o["nilpotent"] = matrix_json(w.nilpotent);
    if (w.inertia_action) o["inertia"] = matrix_json(*w.inertia_action);
    return o;
}

inline WDRep wd_from(const Json& v) {
    std::int64_t q = need_integer(v, "q");
    Matrix<CoeffElem> fro = matrix_from(need(v, "frobenius"), q, "frobenius");
    Matrix<CoeffElem> nil =
        v.contains("nilpotent") ? matrix_from(v.at("nilpotent"), q, "nilpotent")
                                : Matrix<CoeffElem>(fro.dim());
    std::optional<Matrix<CoeffElem>> inertia;
    if (v.contains("inertia")) inertia = matrix_from(v.at("inertia"), q, "inertia");
    return WDRep(q, std::move(fro), std::move(nil), std::move(inertia));
}

// ---- residue-field and cyclotomic values ----

inline Json ffelem_json(const FiniteFieldElem& x) {
    Json a = Json::array();
    for (std::int64_t c : x.coeffs()) a.push_back(c);
    return a;
}

inline Json cycsum_json(const CycSum& s) {
    Json o = Json::object();
    o["modulus"] = s.modulus();
    Json cs = Json::array();
    for (const Int& c : s.coefficients()) cs.push_back(c.str());
    o["coefficients"] = std::move(cs);
    return o;
}

inline std::string gl2_kind_name(GL2ClassKind k) {
    switch (k) {
        case GL2ClassKind::central: return "central";
        case GL2ClassKind::central_unipotent: return "central-unipotent";
        case GL2ClassKind::split: return "split";
        case GL2ClassKind::elliptic: return "elliptic";
    }
    throw domain_error("unknown class kind");
}

inline GL2Class gl2class_from(const Json& v) {
    std::string kind = need_string(v, "kind");
    Int a(need_integer(v, "a"));
    Int b(v.contains("b") ? need_integer(v, "b") : 0);
    if (kind == "central") return GL2Class(GL2ClassKind::central, a);
    if (kind == "central-unipotent") return GL2Class(GL2ClassKind::central_unipotent, a);
    if (kind == "split") return GL2Class(GL2ClassKind::split, a, b);
    if (kind == "elliptic") return GL2Class(GL2ClassKind::elliptic, a);
    throw json_shape_error("unknown class kind '" + kind + "'");
}

inline std::vector<int> int_tuple_from(const Json& v, const std::string& what) {
    if (!v.is_array()) throw json_shape_error(what + " must be an array of integers");
    std::vector<int> out;
    for (const Json& e : v) {
        if (!e.is_number_integer()) throw json_shape_error(what + " entries must be integers");
        out.push_back(e.get<int>());
    }
    return out;
}

inline Json int_tuple_json(const std::vector<int>& v) {
    Json a = Json::array();
    for (int x : v) a.push_back(x);
    return a;
}

}  // namespace modl
