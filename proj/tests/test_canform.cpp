#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ratsys/canform.hpp"
#include "ratsys/exprio.hpp"

using namespace ratsys;

namespace {

std::string fixture(const char* name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

const std::vector<std::string> kX1{"x1"};
const std::vector<std::string> kX12{"x1", "x2"};
const std::vector<std::string> kX123{"x1", "x2", "x3"};

RationalFunction R1(const char* text) { return parse_rational(text, kX1); }
RationalFunction R2(const char* text) { return parse_rational(text, kX12); }
RationalFunction R3(const char* text) { return parse_rational(text, kX123); }

bool has_violation(const OcfReport& report, const std::string& code) {
  for (const auto& v : report.violations) {
    if (v.code == code) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("is_ocf accepts the canonical fixtures") {
  for (const char* name : {"example3.json", "di_canonical.json"}) {
    OcfReport report = is_ocf(load_system(fixture(name)));
    INFO(name);
    CHECK(report.is_ocf);
    CHECK(report.controllability_assumed);
    CHECK(report.fn1_nonvanishing);
    CHECK(report.violations.empty());
  }
}

TEST_CASE("is_ocf pinpoints structural violations") {
  OcfReport permuted = is_ocf(load_system(fixture("di_permuted.json")));
  CHECK_FALSE(permuted.is_ocf);
  CHECK(has_violation(permuted, "output_not_first_coordinate"));
  CHECK(has_violation(permuted, "drift_not_chain"));
  CHECK(has_violation(permuted, "input_gain_vanishes"));

  OcfReport e4 = is_ocf(load_system(fixture("example4.json")));
  CHECK_FALSE(e4.is_ocf);
  CHECK(has_violation(e4, "drift_not_chain"));
  CHECK(has_violation(e4, "input_gain_vanishes"));
  CHECK_FALSE(has_violation(e4, "output_not_first_coordinate"));
  for (const auto& v : e4.violations) {
    if (v.code == "drift_not_chain") CHECK(v.index == 0);
  }
}

TEST_CASE("is_ocf requires the controllability assumption") {
  RationalSystem di = load_system(fixture("di_canonical.json"));
  di.assumptions.algebraically_controllable = false;
  OcfReport report = is_ocf(di);
  CHECK_FALSE(report.is_ocf);
  CHECK_FALSE(report.controllability_assumed);
  CHECK(report.violations.empty());
  CHECK(report.fn1_nonvanishing);
}

TEST_CASE("is_ocf tests the gain on the variety, not the polynomial") {
  // On V(x2) the gain x2 is a nonzero polynomial that still vanishes.
  RationalSystem system{Variety(2, {parse_polynomial("x2", kX12)}),
                        kX12,
                        {R2("x2"), R2("0")},
                        {R2("0"), R2("x2")},
                        R2("x1"),
                        {Rat(0), Rat(0)},
                        {Rat(0), Rat(1)},
                        {true, true}};
  OcfReport report = is_ocf(system);
  CHECK_FALSE(report.fn1_nonvanishing);
  CHECK(has_violation(report, "input_gain_vanishes"));
}

TEST_CASE("scalar chain with dead gain") {
  RationalSystem system{Variety(1, {}), kX1,      {R1("x1")}, {R1("0")},
                        R1("x1"),       {Rat(1)}, {Rat(0), Rat(1)},
                        {true, true}};
  OcfReport report = is_ocf(system);
  CHECK_FALSE(report.is_ocf);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].code == "input_gain_vanishes");
  CHECK(report.violations[0].index == 0);
}

TEST_CASE("identity map leaves a system unchanged") {
  for (const char* name : {"example3.json", "circle.json"}) {
    RationalSystem system = load_system(fixture(name));
    RationalSystem moved = apply_map(system, identity_map(system.X));
    INFO(name);
    CHECK(systems_structurally_equal(system, moved));
    CHECK(moved.input_values == system.input_values);
    CHECK(moved.assumptions.no_algebraic_gap ==
          system.assumptions.no_algebraic_gap);
  }
}

TEST_CASE("make_birational_map rejects a non-invertible pair") {
  Variety line(1, {});
  CHECK_THROWS_WITH_AS(
      make_birational_map(line, line, {R1("x1^2")}, {R1("x1")}),
      doctest::Contains("verification failed"), error);
}

TEST_CASE("make_birational_map rejects shape mismatches") {
  Variety line(1, {});
  Variety plane(2, {});
  CHECK_THROWS_AS(
      make_birational_map(line, plane, {R1("x1")}, {R2("x1"), R2("x2")}),
      error);
  CHECK_THROWS_AS(make_birational_map(line, line, {R2("x1")}, {R1("x1")}),
                  error);
}

TEST_CASE("half-angle parametrization of the circle") {
  RationalSystem circle = load_system(fixture("circle.json"));
  Variety line(1, {});
  BirationalMap map = make_birational_map(
      circle.X, line, {R2("x2/(1 + x1)")},
      {R1("(1 - x1^2)/(1 + x1^2)"), R1("(2*x1)/(1 + x1^2)")});
  REQUIRE(map.exception_source.generators().size() == 1);
  CHECK(map.exception_source.generators()[0] ==
        parse_polynomial("x1 + 1", kX12));
  REQUIRE(map.exception_target.generators().size() == 1);
  CHECK(map.exception_target.generators()[0] ==
        parse_polynomial("(1 + x1^2)^2", kX1));
}

TEST_CASE("apply_map under a linear similarity") {
  RationalSystem di = load_system(fixture("di_canonical.json"));
  Variety plane(2, {});
  BirationalMap z = make_birational_map(plane, plane,
                                        {R2("x1 + x2"), R2("x2")},
                                        {R2("x1 - x2"), R2("x2")});
  RationalSystem moved = apply_map(di, z);
  CHECK(moved.h == R2("x1 - x2"));
  CHECK(moved.f0[0] == R2("x2"));
  CHECK(moved.f0[1] == R2("0"));
  CHECK(moved.f1[0] == R2("1"));
  CHECK(moved.f1[1] == R2("1"));
  CHECK(moved.x0 == std::vector<Rat>{Rat(3), Rat(1)});
  CHECK(moved.variables == kX12);
  CHECK_FALSE(is_ocf(moved).is_ocf);
}

TEST_CASE("apply_map inverts through a reciprocal chart") {
  Variety line(1, {});
  BirationalMap recip = make_birational_map(line, line, {R1("1/x1")},
                                            {R1("1/x1")});
  RationalSystem system{line,     kX1,      {R1("x1")},       {R1("0")},
                        R1("x1"), {Rat(2)}, {Rat(0), Rat(1)}, {true, true}};
  RationalSystem moved = apply_map(system, recip);
  CHECK(moved.h == R1("1/x1"));
  CHECK(moved.f0[0] == R1("-x1"));
  CHECK(moved.x0 == std::vector<Rat>{Rat(1, 2)});

  system.x0 = {Rat(0)};
  CHECK_THROWS_WITH_AS(apply_map(system, recip),
                       doctest::Contains("exception locus"), error);
}

TEST_CASE("apply_map checks the source variety") {
  RationalSystem e3 = load_system(fixture("example3.json"));
  RationalSystem circle = load_system(fixture("circle.json"));
  CHECK_THROWS_WITH_AS(apply_map(e3, identity_map(circle.X)),
                       doctest::Contains("source"), error);
}

TEST_CASE("to_ocf relabels the permuted double integrator") {
  CanonicalizationResult result =
      to_ocf(load_system(fixture("di_permuted.json")));
  CHECK(result.n_o == 2);
  CHECK(ocf_identical(result.system, load_system(fixture("di_canonical.json"))));
  CHECK(result.map.forward == std::vector<RationalFunction>{R2("x2"), R2("x1")});
  CHECK(result.map.inverse == std::vector<RationalFunction>{R2("x2"), R2("x1")});
  // No denominators anywhere: both exception loci are empty.
  REQUIRE(result.map.exception_source.generators().size() == 1);
  CHECK(result.map.exception_source.generators()[0].is_one());
  REQUIRE(result.map.exception_target.generators().size() == 1);
  CHECK(result.map.exception_target.generators()[0].is_one());
}

TEST_CASE("to_ocf is the identity on a system already in form") {
  RationalSystem e3 = load_system(fixture("example3.json"));
  CanonicalizationResult result = to_ocf(e3);
  CHECK(result.n_o == 2);
  CHECK(systems_structurally_equal(result.system, e3));
  CHECK(ocf_identical(result.system, e3));
  CHECK(result.map.forward ==
        std::vector<RationalFunction>{R2("x1"), R2("x2")});
  REQUIRE(result.map.exception_source.generators().size() == 1);
  CHECK(result.map.exception_source.generators()[0] ==
        parse_polynomial("x1^2 + 1", kX12));
  REQUIRE(result.map.exception_target.generators().size() == 1);
  CHECK(result.map.exception_target.generators()[0] ==
        parse_polynomial("-x1^2*x2 - x2", kX12));
}

TEST_CASE("to_ocf flattens the polynomial drift example") {
  RationalSystem e4 = load_system(fixture("example4.json"));
  CanonicalizationResult result = to_ocf(e4);
  CHECK(result.n_o == 3);

  const RationalSystem& out = result.system;
  CHECK(out.h == R3("x1"));
  CHECK(out.f0[0] == R3("x2"));
  CHECK(out.f0[1] == R3("x3"));
  CHECK(out.f0[2] == R3("2*x1 - 5*x2 + 4*x3"));
  CHECK(out.f1[0].is_zero());
  CHECK(out.f1[1].is_zero());
  CHECK(out.f1[2].is_zero());
  CHECK(out.x0 == std::vector<Rat>{Rat(1), Rat(1), Rat(0)});

  CHECK(result.map.forward ==
        std::vector<RationalFunction>{R2("x1"), R2("x1 - x2^2 + x2"),
                                      R2("x1 - 3*x2^2 + 2*x2")});
  CHECK(result.map.forward[0] == e4.h);
  CHECK(result.map.inverse ==
        std::vector<RationalFunction>{R3("x1"), R3("-2*x1 + 3*x2 - x3")});

  // The image is a hypersurface and the forward map lands on it.
  REQUIRE(out.X.ideal().generators().size() == 1);
  CHECK(out.X.dim() == 2);
  RationalFunction pullback =
      RationalFunction::from_polynomial(out.X.ideal().generators()[0])
          .substituted(result.map.forward);
  CHECK(pullback.is_zero());
  CHECK(out.X.contains(out.x0));
}

TEST_CASE("to_ocf is idempotent") {
  CanonicalizationResult first = to_ocf(load_system(fixture("example4.json")));
  CanonicalizationResult second = to_ocf(first.system);
  CHECK(second.n_o == first.n_o);
  CHECK(systems_structurally_equal(second.system, first.system));
  for (int i = 0; i < 3; ++i) {
    CHECK(second.map.forward[i] == RationalFunction::variable(3, i));
  }
}

TEST_CASE("to_ocf refuses unobservable systems") {
  CHECK_THROWS_WITH_AS(to_ocf(load_system(fixture("nonobservable.json"))),
                       doctest::Contains("not rationally observable"), error);
}

TEST_CASE("to_ocf requires both standing assumptions") {
  CHECK_THROWS_WITH_AS(to_ocf(load_system(fixture("circle.json"))),
                       doctest::Contains("asserted"), error);
}

TEST_CASE("ocf_identical rejects non-canonical arguments") {
  RationalSystem permuted = load_system(fixture("di_permuted.json"));
  RationalSystem canonical = load_system(fixture("di_canonical.json"));
  CHECK_THROWS_AS(ocf_identical(permuted, canonical), error);
}

TEST_CASE("structural equality ignores labels but not data") {
  RationalSystem a = load_system(fixture("di_canonical.json"));
  RationalSystem b = a;
  b.variables = {"p", "q"};
  b.input_values = {Rat(0), Rat(5)};
  CHECK(systems_structurally_equal(a, b));
  b.x0[1] = Rat(7);
  CHECK_FALSE(systems_structurally_equal(a, b));
  RationalSystem c = load_system(fixture("example3.json"));
  CHECK_FALSE(systems_structurally_equal(a, c));
}
