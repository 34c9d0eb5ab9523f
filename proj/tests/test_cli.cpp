#include <doctest.h>

#include <cstdlib>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doeblin/cli.hpp"

namespace {

const std::string kData = DOEBLIN_TEST_DATA;

struct Run {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "doeblin");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = doeblin::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return kData + "/" + name; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("coef on W1 reports tau 0.75 from JSON and CSV") {
    const auto a = run({"coef", data("w1.json")});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("\"tau\": 0.75") != std::string::npos);
    const auto b = run({"coef", data("w1.csv")});
    REQUIRE(b.code == 0);
    CHECK(b.json()["tau"] == a.json()["tau"]);
    CHECK(a.json()["tau_max"].get<double>() == 1.25);
  }

  TEST_CASE("coef split and degradation") {
    const auto r = run({"coef", data("w1.json"), "--split", "--degrade", "0.75"});
    REQUIRE(r.code == 0);
    const auto j = r.json();
    CHECK(j["minorization"]["alpha"].get<double>() == 0.75);
    CHECK(j["degradation"]["channel"][2][1].get<double>() == doctest::Approx(2.0 / 3));
    CHECK(run({"coef", data("w1.json"), "--degrade", "0.8"}).code == 2);
  }

  TEST_CASE("fuse on equal PMFs returns the input; disjoint PMFs are infeasible") {
    const auto r = run({"fuse", data("equal_pmfs.json")});
    REQUIRE(r.code == 0);
    const auto f = r.json()["fused"];
    CHECK(f[0].get<double>() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(f[1].get<double>() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(f[2].get<double>() == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.json()["agreement"].get<double>() == doctest::Approx(1.0));
    const auto d = run({"fuse", data("disjoint.json")});
    CHECK(d.code == 2);
    CHECK(d.out.empty());
    CHECK(!d.err.empty());
  }

  TEST_CASE("verify union on the symmetric 0.8 instance gives 1.4") {
    const auto r = run({"verify", "--problem", "union", data("sym08.json")});
    REQUIRE(r.code == 0);
    const auto j = r.json();
    CHECK(std::abs(j["value"].get<double>() - 1.4) < 1e-9);
    CHECK(j["gap"].get<double>() < 1e-9);
    const auto e = run({"verify", "--problem", "union", "--exact", "--witness", data("sym08.json")});
    REQUIRE(e.code == 0);
    CHECK(e.json()["exact_value"] == "7/5");
    CHECK(e.json()["witness"].is_array());
  }

  TEST_CASE("verify with no closed form reports a null gap and a note") {
    const auto r = run({"verify", "--problem", "union", data("four_sym.json")});
    REQUIRE(r.code == 0);
    CHECK(r.json()["closed_form"].is_null());
    CHECK(r.json()["note"].get<std::string>().find("no closed form") != std::string::npos);
  }

  TEST_CASE("verify diag and estimator") {
    const auto d = run({"verify", "--problem", "diag", data("three_pmfs.json")});
    REQUIRE(d.code == 0);
    CHECK(d.json()["gap"].get<double>() < 1e-9);
    CHECK(d.json()["sense"] == "max");
    const auto e = run({"verify", "--problem", "estimator", "--sense", "min", data("w1.json")});
    REQUIRE(e.code == 0);
    CHECK(e.json()["value"].get<double>() == 0.375);
  }

  TEST_CASE("couple kinds") {
    const auto mx = run({"couple", "--kind", "max", data("three_pmfs.json"), "--expand"});
    REQUIRE(mx.code == 0);
    CHECK(mx.json()["value"].get<double>() == doctest::Approx(0.6));
    CHECK(mx.json()["coupling"]["expanded"].is_array());
    const auto mn = run({"couple", "--kind", "min", data("three_pmfs.json")});
    REQUIRE(mn.code == 0);
    CHECK(mn.json()["value"].get<double>() == doctest::Approx(1.5));
    CHECK(mn.json()["coupling"]["components"].size() == 5);
    const auto m3 = run({"couple", "--kind", "min3", data("sym08.json")});
    REQUIRE(m3.code == 0);
    CHECK(m3.json()["value"].get<double>() == doctest::Approx(1.4));
    CHECK(run({"couple", "--kind", "min", data("four_sym.json")}).code == 2);
    const auto jt = run({"couple", "--kind", "joint", data("joints.json")});
    REQUIRE(jt.code == 0);
    CHECK(jt.json()["x_agreement"].get<double>() == doctest::Approx(1.0));
    CHECK(jt.json()["pair_agreement"].get<double>() == doctest::Approx(0.8));
  }

  TEST_CASE("expansion cap from the environment") {
    ::setenv("DOEBLIN_EXPANSION_CAP", "10", 1);
    const auto r = run({"couple", "--kind", "max", data("three_pmfs.json")});
    ::unsetenv("DOEBLIN_EXPANSION_CAP");
    REQUIRE(r.code == 0);
    CHECK(r.json()["verification"]["expanded"] == false);
    CHECK(r.err.find("expansion cap") != std::string::npos);
    CHECK(r.json()["verification"]["max_marginal_residual"].get<double>() < 1e-10);
  }

  TEST_CASE("degroot") {
    const auto r = run({"degroot", "--prior", "[0.5, 0.5]", data("w1.json")});
    REQUIRE(r.code == 0);
    CHECK(r.json()["min_degroot"].get<double>() == doctest::Approx(0.125));
    CHECK(r.json()["max_degroot"].get<double>() == doctest::Approx(0.125));
    CHECK(r.json()["risk_identity_loss"]["bayes_risk"].get<double>() == doctest::Approx(0.375));
    const auto c = run({"degroot", "--prior", "[0.5, 0.5]", data("w1.json"), "--loss", "[[0, 1], [2, 0]]"});
    REQUIRE(c.code == 0);
    CHECK(c.json()["risk"].contains("bayes_risk"));
    CHECK(run({"degroot", "--prior", "[0.5, 0.6]", data("w1.json")}).code == 1);
  }

  TEST_CASE("bayesnet report on the chain") {
    const auto r = run({"bayesnet", data("bsc_chain.json"), "--target", "U2", "--mc", "20000", "3"});
    REQUIRE(r.code == 0);
    const auto j = r.json();
    CHECK(j["percolation"]["probability"].get<double>() == doctest::Approx(0.25));
    CHECK(j["one_minus_tau"].get<double>() == doctest::Approx(0.25));
    CHECK(j["shortcut_free"]["bound"].get<double>() == doctest::Approx(0.25));
    CHECK(j["percolation_mc"]["seed"] == 3);
    const auto rec = run({"bayesnet", data("bsc_chain.json"), "--target", "U1", "--bound", "recursion", "--node", "U2"});
    REQUIRE(rec.code == 0);
    CHECK(rec.json()["recursion"]["bound"].get<double>() == doctest::Approx(0.5));
    CHECK(rec.json()["recursion"]["tau_with_node"].get<double>() == doctest::Approx(0.5));
    CHECK(run({"bayesnet", data("bsc_chain.json"), "--target", "Q"}).code == 1);
    CHECK(run({"bayesnet", data("bsc_chain.json"), "--target", "U1", "--bound", "recursion"}).code == 1);
  }

  TEST_CASE("errors: parse, missing file, malformed input") {
    CHECK(run({}).code == 1);
    CHECK(run({"coef"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"couple", "--kind", "best", data("three_pmfs.json")}).code == 1);
    const auto m = run({"coef", data("nope.json")});
    CHECK(m.code == 1);
    CHECK(!m.err.empty());
    CHECK(run({"coef", data("joints.json")}).code == 1);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("identical inputs give byte-identical output") {
    const std::vector<std::vector<std::string>> cmds{
        {"coef", data("sym08.json"), "--split"},
        {"couple", "--kind", "min", data("three_pmfs.json"), "--expand"},
        {"couple", "--kind", "joint", data("joints.json")},
        {"bayesnet", data("diamond.json"), "--target", "C", "--mc", "50000", "11"},
        {"verify", "--problem", "union", data("three_pmfs.json"), "--witness"},
    };
    for (const auto& c : cmds) {
      const auto a = run(c), b = run(c);
      CHECK(a.code == 0);
      CHECK(a.out == b.out);
    }
  }

  TEST_CASE("floats carry 17 significant digits") {
    const auto r = run({"coef", data("sym08.json"), "--split"});
    REQUIRE(r.code == 0);
    const std::regex num(R"((-?\d+\.\d+(e[-+]\d+)?))");
    int checked = 0;
    for (auto it = std::sregex_iterator(r.out.begin(), r.out.end(), num); it != std::sregex_iterator(); ++it) {
      const std::string s = (*it)[1];
      const double v = std::stod(s);
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string expect(buf);
      if (expect.find_first_of(".e") == std::string::npos) expect += ".0";
      CHECK(s == expect);
      ++checked;
    }
    CHECK(checked > 5);
  }
}
