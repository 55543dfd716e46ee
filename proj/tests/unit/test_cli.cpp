#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <string>
#include <vector>

#include "modl/cli.hpp"

using modl::CliResult;
using modl::Invocation;
using modl::Json;
using modl::parse_invocation;
using modl::run_tokens;
using modl::usage_error;

namespace {

CliResult run(std::vector<std::string> tokens) { return run_tokens(std::move(tokens)); }

Json out_json(const CliResult& r) { return Json::parse(r.output); }

}  // namespace

TEST_CASE("invocation parsing: token handling and usage errors", "[cli]") {
    SECTION("flags with values, single or double dashes") {
        Invocation inv = parse_invocation({"hilbert", "-a", "-1", "--b", "-1", "-p", "2"});
        REQUIRE(inv.subcommand == "hilbert");
        REQUIRE(inv.args.at("a") == "-1");
        REQUIRE(inv.args.at("b") == "-1");
        REQUIRE(inv.args.at("p") == "2");
    }

    SECTION("payload flags keep their JSON text verbatim") {
        Invocation inv = parse_invocation(
            {"transfer", "--group", "SO5", "--q", "5", "--chars", R"([{"-1":"1"},{"1":"1"}])"});
        REQUIRE(inv.args.at("chars") == R"([{"-1":"1"},{"1":"1"}])");
    }

    SECTION("malformed invocations") {
        REQUIRE_THROWS_AS(parse_invocation({}), usage_error);
        REQUIRE_THROWS_AS(parse_invocation({"nosuch"}), usage_error);
        REQUIRE_THROWS_AS(parse_invocation({"hilbert", "--bogus", "1"}), usage_error);
        REQUIRE_THROWS_AS(parse_invocation({"hilbert", "-a"}), usage_error);
        REQUIRE_THROWS_AS(parse_invocation({"hilbert", "-a", "1", "-a", "2"}), usage_error);
        REQUIRE_THROWS_AS(parse_invocation({"hilbert", "stray", "-a", "1"}), usage_error);
        // numeric arguments are exact: no floating point accepted
        REQUIRE_THROWS_AS(parse_invocation({"hilbert", "-a", "1.5", "-b", "1", "-p", "2"}),
                          usage_error);
        // zero arguments surface the precondition at parse time
        REQUIRE_THROWS_AS(parse_invocation({"hilbert", "-a", "0", "-b", "1", "-p", "3"}),
                          usage_error);
    }

    SECTION("usage failures exit 2 with the offending flag named") {
        CliResult r = run({"hilbert", "-a", "0", "-b", "1", "-p", "3"});
        REQUIRE(r.exit_code == 2);
        REQUIRE(r.output == R"({"error":"Usage","message":"hilbert: flag --a must be nonzero"})");

        REQUIRE(run({"nosuch", "-a", "1"}).exit_code == 2);
        REQUIRE(run({"hilbert", "--bogus", "1", "-a", "1", "-b", "1"}).exit_code == 2);
        REQUIRE(run({"green", "--q", "5", "--k", "3"}).exit_code == 2);
        REQUIRE(run({"green", "--q", "5", "--k", "3", "--regular", "--length"}).exit_code == 2);
        REQUIRE(run({"repro", "unknown-thing"}).exit_code == 2);
    }
}

TEST_CASE("hilbert subcommand: symbols, legendre mode, reciprocity support", "[cli]") {
    CliResult sym = run({"hilbert", "-a", "-1", "-b", "-1", "-p", "2"});
    REQUIRE(sym.exit_code == 0);
    REQUIRE(sym.output == R"({"symbol":-1})");

    CliResult leg = run({"hilbert", "--legendre", "-a", "2", "-p", "7"});
    REQUIRE(leg.exit_code == 0);
    REQUIRE(leg.output == R"({"symbol":1})");

    CliResult sup = run({"hilbert", "-a", "3", "-b", "5"});
    REQUIRE(sup.exit_code == 0);
    REQUIRE(sup.output == R"({"places":["inf","2","3","5"]})");
}

TEST_CASE("form subcommands: profile, equivalent, classify", "[cli]") {
    CliResult prof = run({"profile", "--form", R"(["1","-1","5"])", "-p", "5"});
    REQUIRE(prof.exit_code == 0);
    REQUIRE(prof.output == R"({"profile":{"dim":3,"disc":"-5","hasse":1,"place":"5"}})");

    CliResult all = run({"profile", "--form", R"(["1","-1","5"])"});
    REQUIRE(all.exit_code == 0);
    Json profiles = out_json(all)["profiles"];
    REQUIRE(profiles.size() == 3);
    REQUIRE(profiles[0]["place"] == "inf");
    REQUIRE(profiles[0]["signature"] == Json::array({2, 1}));

    CliResult eq = run({"equivalent", "--form1", R"(["1","1"])", "--form2", R"(["2","2"])"});
    REQUIRE(eq.exit_code == 0);
    REQUIRE(eq.output == R"({"equivalent":true})");
    CliResult eqp =
        run({"equivalent", "--form1", R"(["1","1"])", "--form2", R"(["1","-1"])", "-p", "5"});
    REQUIRE(eqp.output == R"({"equivalent":true})");  // -1 is a square at 5

    CliResult cls = run({"classify", "--form", R"(["1","-1","1","-1","1"])", "-p", "5"});
    REQUIRE(cls.exit_code == 0);
    REQUIRE(cls.output == R"({"alpha":"1","class":"split","n":2,"parity":"odd"})");

    CliResult hasse = run({"classify", "--parity", "odd", "-n", "2", "--delta", "1", "-p", "3"});
    REQUIRE(hasse.output == R"({"hasse":1})");
    CliResult herm = run(
        {"classify", "--parity", "hermitian", "-n", "2", "--alpha", "-1", "--delta", "1", "-p", "3"});
    REQUIRE(herm.exit_code == 0);
    REQUIRE(out_json(herm).contains("hasse"));
}

TEST_CASE("exists subcommand reports the parity decision with its reason", "[cli]") {
    CliResult no = run({"exists", "--kind", "odd", "--r", "1", "--n", "2"});
    REQUIRE(no.exit_code == 0);
    REQUIRE(no.output == R"({"exists":false,"reason":"r*n(n+1)/2 = 3 is odd"})");

    CliResult yes = run({"exists", "--kind", "odd", "--r", "1", "--n", "3"});
    REQUIRE(yes.output == R"({"exists":true,"reason":"r*n(n+1)/2 = 6 is even"})");
}

TEST_CASE("globalize chain: certificate, check, auxiliary place, realization", "[cli]") {
    std::vector<std::string> glob = {"globalize", "--kind",        "quadratic", "--dim", "4",
                                     "--disc",    "2",             "--hasse",   "1",     "--place",
                                     "3",         "--global-disc", "2"};
    CliResult g = run(glob);
    REQUIRE(g.exit_code == 0);
    REQUIRE(g.output ==
            R"({"certificate":{"anchored":{"place":"3","profile":{"dim":4,"disc":"2","hasse":1,"place":"3"}},)"
            R"("dim":4,"disc":"2","finite_data":{"2":-1,"3":1,"5":-1},"kind":"quadratic-even",)"
            R"("real_data":0,"support":["2","3","5"]}})");

    std::string cert = out_json(g)["certificate"].dump();
    CliResult chk = run({"check-cert", "--cert", cert});
    REQUIRE(chk.exit_code == 0);
    REQUIRE(chk.output == R"({"detail":"","ok":true})");

    CliResult aux = run({"aux-place", "--cert", cert});
    REQUIRE(aux.exit_code == 0);
    REQUIRE(aux.output == R"({"place":"7"})");

    CliResult form = run({"realize", "--cert", cert});
    REQUIRE(form.exit_code == 0);
    REQUIRE(form.output == R"({"form":["1","1","5","10"]})");

    SECTION("the environment variable caps the auxiliary-place search") {
        setenv("MODL_AUX_PLACE_BOUND", "2", 1);
        CliResult capped = run({"aux-place", "--cert", cert});
        unsetenv("MODL_AUX_PLACE_BOUND");
        REQUIRE(capped.exit_code == 1);
        REQUIRE(capped.output ==
                R"({"error":"SearchExhausted","message":"no auxiliary split place up to 2"})");
    }

    SECTION("parity obstructions are structured domain errors") {
        CliResult obs = run({"globalize", "--kind", "quadratic", "--dim", "3", "--disc", "1",
                             "--hasse", "1", "--place", "3", "--global-disc", "1"});
        REQUIRE(obs.exit_code == 1);
        Json j = out_json(obs);
        REQUIRE(j["error"] == "Obstruction");
        REQUIRE(j["minimal_r"] == 2);
    }

    SECTION("hermitian certificates round-trip through check-cert") {
        CliResult h = run({"globalize", "--kind", "hermitian", "--n", "3", "--alpha", "-1",
                           "--place", "3"});
        REQUIRE(h.exit_code == 0);
        Json hc = out_json(h)["certificate"];
        REQUIRE(hc["kind"] == "hermitian");
        CliResult hchk = run({"check-cert", "--cert", hc.dump()});
        REQUIRE(hchk.output == R"({"detail":"","ok":true})");
    }
}

TEST_CASE("transfer subcommand: explicit transfer and modulus exponents", "[cli]") {
    CliResult t = run(
        {"transfer", "--group", "SO5", "--q", "5", "--chars", R"([{"-1":"1"},{"1":"1"}])"});
    REQUIRE(t.exit_code == 0);
    REQUIRE(t.output ==
            R"({"param":{"N":4,"eigenvalues":[{"-1":"1"},{"-1":"1"},{"1":"1"},{"1":"1"}],"q":5}})");

    CliResult m = run({"transfer", "--group", "Sp4", "--q", "3", "--modulus-exponents", "2"});
    REQUIRE(m.output == R"({"exponents":["2","1"]})");
}

TEST_CASE("charpoly subcommand emits descending coefficients and the duality flag", "[cli]") {
    CliResult r = run({"charpoly", "--param", R"({"N":2,"q":5,"eigenvalues":[{"1":"1"},{"-1":"1"}]})"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output ==
            R"({"coefficients":[{"0":"1"},{"-1":"-1","1":"-1"},{"0":"1"}],"selfdual":true})");

    CliResult bad = run({"charpoly", "--param", R"({"N":2,"q":5,"eigenvalues":[{"1":"1"}]})"});
    REQUIRE(bad.exit_code == 2);  // declared N disagrees with the eigenvalue count
}

TEST_CASE("integral subcommand: parameter, satake, and valuation modes", "[cli]") {
    CliResult p = run({"integral", "--param", R"({"N":2,"q":5,"eigenvalues":[{"1":"1"},{"-1":"1"}]})",
                       "--ell", "3"});
    REQUIRE(p.output == R"({"integral":true})");

    CliResult s = run({"integral", "--group", "SO5", "--q", "5", "--chars",
                       R"([{"-1":"1"},{"1":"1"}])", "--ell", "3"});
    REQUIRE(s.output == R"({"integral":true})");

    CliResult v = run({"integral", "--value", "18/5", "--ell", "3"});
    REQUIRE(v.output == R"({"valuation":2})");

    CliResult nv = run({"integral", "--value", "1/3", "--ell", "3"});
    REQUIRE(nv.output == R"({"valuation":-1})");
}

TEST_CASE("congruent subcommand covers parameters and representations", "[cli]") {
    const std::string p1 = R"({"N":2,"q":5,"eigenvalues":[{"1":"1"},{"-1":"1"}]})";
    const std::string p2 = R"({"N":2,"q":5,"eigenvalues":[{"3":"1"},{"-3":"1"}]})";
    CliResult c = run({"congruent", "--ell", "3", "--param1", p1, "--param2", p2});
    REQUIRE(c.exit_code == 0);
    REQUIRE(c.output == R"({"congruent":true})");

    SECTION("mismatched sizes are a structured domain error") {
        CliResult bad = run({"congruent", "--ell", "3", "--param1", p1, "--param2",
                             R"({"N":3,"q":5,"eigenvalues":[{"1":"1"},{"-1":"1"},{"0":"1"}]})"});
        REQUIRE(bad.exit_code == 1);
        REQUIRE(bad.output == R"({"error":"ShapeMismatch","message":"parameters of sizes 2 and 3"})");
    }

    SECTION("weil-deligne mode") {
        CliResult w = run(
            {"congruent", "--ell", "3", "--rep1",
             R"({"q":5,"frobenius":[[{"0":"1"},{}],[{},{"2":"1"}]],"nilpotent":[[{},{}],[{},{}]]})",
             "--rep2",
             R"({"q":5,"frobenius":[[{"2":"1"},{}],[{},{"0":"1"}]],"nilpotent":[[{},{}],[{},{}]]})"});
        REQUIRE(w.output == R"({"congruent":true})");
    }

    SECTION("exactly one input family") {
        REQUIRE(run({"congruent", "--ell", "3", "--param1", p1, "--rep2", "{}"}).exit_code == 2);
        REQUIRE(run({"congruent", "--ell", "3"}).exit_code == 2);
    }
}

TEST_CASE("support subcommand compares supercuspidal supports mod ell", "[cli]") {
    CliResult r = run({"support", "--group", "SO5", "--q", "5", "--chars1",
                       R"([{"-1":"1"},{"1":"1"}])", "--chars2", R"([{"3":"1"},{"1":"1"}])",
                       "--ell", "3"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output == R"({"same_support":true})");
}

TEST_CASE("flip subcommand: square-root flip and determinant twist", "[cli]") {
    // odd orthogonal groups flip trivially
    CliResult id = run({"flip", "--group", "SO5", "--q", "5", "--param",
                        R"({"N":4,"q":5,"eigenvalues":[{"-1":"1"},{"-1":"1"},{"1":"1"},{"1":"1"}]})"});
    REQUIRE(id.output ==
            R"({"param":{"N":4,"eigenvalues":[{"-1":"1"},{"-1":"1"},{"1":"1"},{"1":"1"}],"q":5}})");

    // even orthogonal groups negate the coefficients; applying twice restores
    const std::string even = R"({"N":4,"q":3,"eigenvalues":[{"1":"1"},{"-1":"1"},{"0":"1"},{"0":"1"}]})";
    CliResult once = run({"flip", "--group", "SO4,square", "--q", "3", "--param", even});
    REQUIRE(once.output ==
            R"({"param":{"N":4,"eigenvalues":[{"-1":"-1"},{"0":"-1"},{"0":"-1"},{"1":"-1"}],"q":3}})");
    CliResult twice =
        run({"flip", "--group", "SO4,square", "--q", "3", "--param", out_json(once)["param"].dump()});
    REQUIRE(out_json(twice)["param"] == Json::parse(R"({"N":4,"eigenvalues":[{"-1":"1"},{"0":"1"},{"0":"1"},{"1":"1"}],"q":3})"));

    CliResult tw = run({"flip", "--param", R"({"N":2,"q":5,"eigenvalues":[{"1":"1"},{"-1":"1"}]})",
                        "--twist", "1/2"});
    REQUIRE(tw.output == R"({"param":{"N":2,"eigenvalues":[{"0":"1"},{"2":"1"}],"q":5}})");
}

TEST_CASE("base-change subcommand: unramified parameter lift and green length", "[cli]") {
    CliResult p = run({"base-change", "--param", R"({"N":2,"q":5,"eigenvalues":[{"1":"1"},{"-1":"1"}]})",
                       "--f", "2", "--d", "2"});
    REQUIRE(p.output == R"({"param":{"N":2,"eigenvalues":[{"-1":"1"},{"1":"1"}],"q":25}})");

    CliResult l = run({"base-change", "--q", "5", "--k", "3"});
    REQUIRE(l.output == R"({"length":2})");
}

TEST_CASE("so2 subcommand flags the degenerate split-torus transfers", "[cli]") {
    CliResult r = run({"so2", "--q", "5", "--char", R"({"1":"1"})"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output ==
            R"({"param":{"N":2,"degenerate_character":{"0":"1"},"eigenvalues":[{"-1":"1"},{"1":"1"}],"q":5}})");

    CliResult neg = run({"so2", "--q", "5", "--char", R"({"-1":"-1"})"});
    REQUIRE(out_json(neg)["param"]["degenerate_character"] == Json::parse(R"({"0":"-1"})"));
}

TEST_CASE("weil-deligne subcommands: validate, semisimplify, reduce", "[cli]") {
    const std::string scaling_pair =
        R"({"q":5,"frobenius":[[{"0":"1"},{}],[{},{"2":"1"}]],"nilpotent":[[{},{"0":"1"}],[{},{}]]})";
    CliResult ok = run({"wd-validate", "--rep", scaling_pair});
    REQUIRE(ok.exit_code == 0);
    REQUIRE(ok.output == R"({"defects":[],"ok":true})");

    const std::string identity_frob =
        R"({"q":5,"frobenius":[[{"0":"1"},{}],[{},{"0":"1"}]],"nilpotent":[[{},{"0":"1"}],[{},{}]]})";
    CliResult bad = run({"wd-validate", "--rep", identity_frob});
    REQUIRE(bad.exit_code == 0);
    Json rep = out_json(bad);
    REQUIRE(rep["ok"] == false);
    REQUIRE(rep["defects"].size() == 1);

    const std::string triangular =
        R"({"q":5,"frobenius":[[{"0":"1"},{"0":"1"}],[{},{"2":"1"}]],"nilpotent":[[{},{}],[{},{}]]})";
    SECTION("semisimplification keeps an already semisimple frobenius") {
        CliResult ss = run({"wd-ss", "--rep", triangular});
        REQUIRE(ss.output ==
                R"({"rep":{"frobenius":[[{"0":"1"},{"0":"1"}],[{},{"2":"1"}]],"nilpotent":[[{},{}],[{},{}]],"q":5}})");
    }
    SECTION("semisimplification composed with the dictionary") {
        CliResult par = run({"wd-ss", "--rep", triangular, "--as-param"});
        REQUIRE(par.output == R"({"param":{"N":2,"eigenvalues":[{"0":"1"},{"2":"1"}],"q":5}})");
    }
    SECTION("the dictionary in the other direction") {
        CliResult wd = run({"wd-ss", "--param", R"({"N":2,"q":5,"eigenvalues":[{"1":"1"},{"-1":"1"}]})"});
        REQUIRE(wd.output ==
                R"({"rep":{"frobenius":[[{"-1":"1"},{}],[{},{"1":"1"}]],"nilpotent":[[{},{}],[{},{}]],"q":5}})");
    }

    SECTION("reduction emits residue classes with the context degree") {
        CliResult red = run({"wd-reduce", "--rep",
                             R"({"q":5,"frobenius":[[{"0":"1"},{}],[{},{"2":"1"}]],"nilpotent":[[{},{}],[{},{}]]})",
                             "--ell", "3"});
        REQUIRE(red.output == R"({"classes":[[1,0],[2,0]],"degree":2,"ell":3})");
    }

    SECTION("integral model clears denominators by a diagonal conjugation") {
        CliResult mod = run({"wd-reduce", "--rep",
                             R"({"q":5,"frobenius":[[{"0":"1"},{"0":"1/9"}],[{},{"2":"1"}]],"nilpotent":[[{},{}],[{},{}]]})",
                             "--ell", "3", "--model"});
        REQUIRE(mod.output ==
                R"({"conjugator":[[{"0":"9"},{}],[{},{"0":"1"}]],"model":{"frobenius":[[{"0":"1"},{"0":"1"}],[{},{"2":"1"}]],"nilpotent":[[{},{}],[{},{}]],"q":5},"valuation":2})");
    }
}

TEST_CASE("green subcommand: values, regularity, congruence, length", "[cli]") {
    CliResult v = run({"green", "--q", "3", "--k", "1", "--class", R"({"kind":"central","a":0})"});
    REQUIRE(v.output == R"({"value":{"coefficients":["2","0","0","0"],"modulus":8}})");

    REQUIRE(run({"green", "--q", "3", "--k", "1", "--regular"}).output == R"({"regular":true})");
    REQUIRE(run({"green", "--q", "3", "--k", "4", "--regular"}).output == R"({"regular":false})");

    CliResult c = run({"green", "--q", "5", "--k", "3", "--xi2", "11", "--ell", "3"});
    REQUIRE(c.output == R"({"congruent":true})");

    REQUIRE(run({"green", "--q", "5", "--k", "3", "--length"}).output == R"({"length":2})");
}

TEST_CASE("kloosterman subcommand computes twisted sums in characteristic 2", "[cli]") {
    CliResult r = run({"kloosterman", "--q", "4", "-u", "[1,1]", "-a", "1"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output == R"({"value":3})");

    CliResult odd_q = run({"kloosterman", "--q", "3", "-u", "[1,1]", "-a", "1"});
    REQUIRE(odd_q.exit_code == 1);
    REQUIRE(out_json(odd_q)["error"] == "Domain");
}

TEST_CASE("simple-orbits subcommand: normal forms, action, counts, enumeration", "[cli]") {
    REQUIRE(run({"simple-orbits", "--q", "4", "--tuple", "[1,2,3]"}).output ==
            R"({"normal_form":1})");

    CliResult act = run({"simple-orbits", "--q", "4", "--tuple", "[1,2,3]", "--chi", "[1,2]"});
    REQUIRE(act.output == R"({"image":[3,1,3]})");

    REQUIRE(run({"simple-orbits", "--q", "4", "-n", "2"}).output == R"({"count":3})");
    REQUIRE(run({"simple-orbits", "--p", "3", "--q", "3", "-n", "2"}).output == R"({"count":8})");

    CliResult en = run({"simple-orbits", "--q", "4", "-n", "2", "--enumerate"});
    REQUIRE(en.output ==
            R"({"count":3,"orbits":[{"normal_form":1,"tuple":[1,1,1]},{"normal_form":2,"tuple":[1,1,2]},{"normal_form":3,"tuple":[1,1,3]}]})");

    REQUIRE(run({"simple-orbits", "--p", "3", "--q", "3", "-n", "2", "--enumerate"}).exit_code == 2);
}

TEST_CASE("selfdual-params subcommand lists the parameters with charpolys", "[cli]") {
    CliResult r = run({"selfdual-params", "--q", "2", "--r", "1"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output ==
            R"({"modulus":3,"params":[{"charpoly":[1,1,1],"exponent":1},{"charpoly":[1,1,1],"exponent":2}]})");
}

TEST_CASE("repro scenarios reproduce the worked congruence examples", "[cli]") {
    CliResult remark = run({"repro", "remark-6.4", "--q", "5", "--ell", "3"});
    REQUIRE(remark.exit_code == 0);
    REQUIRE(remark.output == R"({"congruent_transfers":true,"params_equal":false,"pass":true})");

    CliResult so2 = run({"repro", "so2", "--q", "5", "--ell", "3"});
    REQUIRE(so2.exit_code == 0);
    REQUIRE(so2.output ==
            R"({"chars_reduce_equal":true,"degenerate_both":true,"degenerate_reductions_differ":true,"pass":true})");

    CliResult klo = run({"repro", "kloosterman-odd"});
    REQUIRE(klo.exit_code == 0);
    REQUIRE(klo.output == R"({"all_odd":true,"checked":114,"pass":true})");

    // the scenario name may also arrive as a flag
    REQUIRE(run({"repro", "--scenario", "kloosterman-odd"}).output == klo.output);
}

TEST_CASE("stdin payloads merge into the invocation", "[cli]") {
    CliResult full = run_tokens({"hilbert", "--stdin"}, R"({"a":"-1","b":"-1","p":"2"})");
    REQUIRE(full.exit_code == 0);
    REQUIRE(full.output == R"({"symbol":-1})");

    SECTION("command-line flags win over payload entries") {
        CliResult mixed = run_tokens({"hilbert", "-a", "-1", "--stdin"}, R"({"a":"7","b":"-1","p":"2"})");
        REQUIRE(mixed.output == R"({"symbol":-1})");
    }

    SECTION("non-string payload values serialize as their JSON text") {
        CliResult nested = run_tokens({"transfer", "--stdin"},
                                      R"({"group":"SO5","q":5,"chars":[{"-1":"1"},{"1":"1"}]})");
        REQUIRE(nested.output ==
                R"({"param":{"N":4,"eigenvalues":[{"-1":"1"},{"-1":"1"},{"1":"1"},{"1":"1"}],"q":5}})");
    }

    SECTION("boolean payload values act as presence flags") {
        CliResult reg = run_tokens({"green", "--stdin"}, R"({"q":3,"k":1,"regular":true})");
        REQUIRE(reg.output == R"({"regular":true})");
        CliResult off = run_tokens({"green", "--stdin"}, R"({"q":3,"k":1,"regular":false})");
        REQUIRE(off.exit_code == 2);  // no mode selected
    }

    SECTION("malformed payloads are usage errors") {
        REQUIRE(run_tokens({"hilbert", "--stdin"}, "not json").exit_code == 2);
        REQUIRE(run_tokens({"hilbert", "--stdin"}, "[1,2]").exit_code == 2);
        REQUIRE(run_tokens({"hilbert", "--stdin"}, R"({"nosuchflag":"1"})").exit_code == 2);
    }
}

TEST_CASE("exit codes partition into success, domain error, and usage error", "[cli]") {
    REQUIRE(run({"hilbert", "-a", "1", "-b", "1", "-p", "2"}).exit_code == 0);
    REQUIRE(run({"kloosterman", "--q", "3", "-u", "[1,1]", "-a", "1"}).exit_code == 1);
    REQUIRE(run({"kloosterman", "--q", "4", "-u", "[1,1]"}).exit_code == 2);

    // domain errors always carry a machine-readable code and a message
    Json dom = out_json(run({"kloosterman", "--q", "3", "-u", "[1,1]", "-a", "1"}));
    REQUIRE(dom.contains("error"));
    REQUIRE(dom.contains("message"));
}
