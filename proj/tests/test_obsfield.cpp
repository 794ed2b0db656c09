#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ratsys/exprio.hpp"
#include "ratsys/obsfield.hpp"

using namespace ratsys;

namespace {

std::string fixture(const char* name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

const std::vector<std::string> kX12{"x1", "x2"};

RationalFunction R(const char* text) { return parse_rational(text, kX12); }

}  // namespace

TEST_CASE("chain of the polynomial drift example") {
  RationalSystem e4 = load_system(fixture("example4.json"));
  GeneratorChain chain = generator_chain(e4, 2);
  REQUIRE(chain.levels.size() == 3);
  REQUIRE(chain.levels[0].size() == 1);
  REQUIRE(chain.levels[1].size() == 1);
  REQUIRE(chain.levels[2].size() == 1);
  CHECK(chain.levels[0][0] == R("x1"));
  CHECK(chain.levels[1][0] == R("x1 - x2^2 + x2"));
  CHECK(chain.levels[2][0] == R("x1 - 3*x2^2 + 2*x2"));
  CHECK(chain.size() == 3);
  CHECK(chain.contains(R("x1 - 3*x2^2 + 2*x2")));
  CHECK_FALSE(chain.contains(R("x2")));
}

TEST_CASE("zero derivatives are never stored") {
  RationalSystem e3 = load_system(fixture("example3.json"));
  GeneratorChain chain = generator_chain(e3, 2);
  // Level 1: L_f0 x1 = x2 (L_f1 x1 = 0 is dropped).
  // Level 2: L_f0 x2 = 0 dropped, L_f1 x2 survives.
  REQUIRE(chain.levels.size() == 3);
  CHECK(chain.levels[0] == std::vector<RationalFunction>{R("x1")});
  CHECK(chain.levels[1] == std::vector<RationalFunction>{R("x2")});
  CHECK(chain.levels[2] ==
        std::vector<RationalFunction>{R("-x2/(1 + x1^2)")});
}

TEST_CASE("duplicates are kept only at their first level") {
  // Drift x1' = x1 reproduces h = x1 forever; the chain dedups globally, so
  // every level past 0 is empty.
  std::vector<std::string> vars{"x1"};
  auto F = [&](const char* s) { return parse_rational(s, vars); };
  RationalSystem system{Variety(1, {}), vars,        {F("x1")}, {F("0")},
                        F("x1"),        {Rat(1)},    {Rat(0), Rat(1)},
                        {true, true}};
  GeneratorChain chain = generator_chain(system, 3);
  REQUIRE(chain.levels.size() == 4);
  CHECK(chain.levels[0].size() == 1);
  CHECK(chain.levels[1].empty());
  CHECK(chain.levels[2].empty());
  CHECK(chain.size() == 1);
}

TEST_CASE("constant output generates an empty tail") {
  std::vector<std::string> vars{"x1"};
  auto F = [&](const char* s) { return parse_rational(s, vars); };
  RationalSystem system{Variety(1, {}), vars,     {F("x1")}, {F("1")},
                        F("5"),         {Rat(0)}, {Rat(0), Rat(1)},
                        {true, true}};
  GeneratorChain chain = generator_chain(system, 2);
  CHECK(chain.levels[0] == std::vector<RationalFunction>{F("5")});
  CHECK(chain.levels[1].empty());
  CHECK(chain.size() == 1);
}

TEST_CASE("transcendence degree, exact") {
  Variety plane(2, {});
  CHECK(trdeg_exact({R("x1"), R("x1^2")}, plane) == 1);
  CHECK(trdeg_exact({R("x1"), R("x2")}, plane) == 2);
  CHECK(trdeg_exact({R("x1 + x2")}, plane) == 1);
  CHECK(trdeg_exact({R("1/2")}, plane) == 0);
  CHECK(trdeg_exact({}, plane) == 0);
  CHECK(trdeg_exact({R("x1/x2"), R("x2")}, plane) == 2);

  RationalSystem circle = load_system(fixture("circle.json"));
  CHECK(trdeg_exact({R("x1")}, circle.X) == 1);
  // On the circle x2 is algebraic over x1.
  CHECK(trdeg_exact({R("x1"), R("x2")}, circle.X) == 1);
}

TEST_CASE("transcendence degree, jacobian probe") {
  Variety plane(2, {});
  CHECK(trdeg_jacobian({R("x1"), R("x1^2")}, plane, 3, 1) == 1);
  CHECK(trdeg_jacobian({R("x1"), R("x2")}, plane, 3, 1) == 2);
  CHECK(trdeg_jacobian({R("x1 + x2")}, plane, 3, 1) == 1);
  CHECK(trdeg_jacobian({R("7")}, plane, 3, 1) == 0);

  RationalSystem circle = load_system(fixture("circle.json"));
  CHECK(trdeg_jacobian({R("x1"), R("x2")}, circle.X, 3, 1) == 1);
  CHECK(trdeg_jacobian({R("x1/x2")}, circle.X, 3, 1) == 1);
}

TEST_CASE("membership in a generated subfield") {
  Variety plane(2, {});
  std::vector<RationalFunction> sym{R("x1 + x2"), R("x1*x2")};
  // Symmetric functions are rational in the elementary ones.
  CHECK(field_membership(R("x1^2 + x2^2"), sym, plane));
  CHECK(field_membership(R("(x1 + x2)/(1 + x1*x2)"), sym, plane));
  CHECK(field_membership(R("1/3"), sym, plane));
  // x1 itself is only algebraic over them.
  CHECK_FALSE(field_membership(R("x1"), sym, plane));
  CHECK_FALSE(field_membership(R("x1 - x2"), sym, plane));
}

TEST_CASE("membership recovers both coordinates from the drift chain") {
  RationalSystem e4 = load_system(fixture("example4.json"));
  std::vector<RationalFunction> chain{R("x1"), R("x1 - x2^2 + x2"),
                                      R("x1 - 3*x2^2 + 2*x2")};
  // 3 b2 - b3 - 2 b1 = x2, so both coordinates are in the field.
  CHECK(field_membership(R("x2"), chain, e4.X));
  CHECK(field_membership(R("x1"), chain, e4.X));
  // Two levels are not enough.
  std::vector<RationalFunction> prefix{chain[0], chain[1]};
  CHECK_FALSE(field_membership(R("x2"), prefix, e4.X));
}

TEST_CASE("membership respects the variety") {
  RationalSystem circle = load_system(fixture("circle.json"));
  // On x1^2 + x2^2 = 1: x2^2 = 1 - x1^2 is rational in x1, x2 itself is not.
  CHECK(field_membership(R("x2^2"), {R("x1")}, circle.X));
  CHECK_FALSE(field_membership(R("x2"), {R("x1")}, circle.X));
}

TEST_CASE("rational observability of the fixtures") {
  for (TrdegMethod method :
       {TrdegMethod::JacobianProbabilistic, TrdegMethod::EliminationExact}) {
    ObsOptions options;
    options.method = method;
    INFO("method ", static_cast<int>(method));

    ObservabilityReport e3 =
        rationally_observable(load_system(fixture("example3.json")), options);
    CHECK(e3.rationally_observable);
    CHECK(e3.trdeg_obs == 2);
    CHECK(e3.dim_X == 2);
    CHECK(e3.stabilized);
    CHECK(e3.trdeg_trajectory == std::vector<int>{1, 2, 2});

    ObservabilityReport e4 =
        rationally_observable(load_system(fixture("example4.json")), options);
    CHECK(e4.rationally_observable);
    CHECK(e4.trdeg_trajectory == std::vector<int>{1, 2, 2});

    ObservabilityReport no =
        rationally_observable(load_system(fixture("nonobservable.json")), options);
    CHECK_FALSE(no.rationally_observable);
    CHECK(no.trdeg_obs == 1);
    CHECK(no.dim_X == 2);

    ObservabilityReport circle =
        rationally_observable(load_system(fixture("circle.json")), options);
    CHECK(circle.rationally_observable);
    CHECK(circle.trdeg_obs == 1);
    CHECK(circle.dim_X == 1);
  }
}

TEST_CASE("observability caveats name the method") {
  ObsOptions options;
  options.method = TrdegMethod::JacobianProbabilistic;
  ObservabilityReport report =
      rationally_observable(load_system(fixture("example3.json")), options);
  bool found = false;
  for (const auto& c : report.caveats) {
    if (c.find("probabilistic") != std::string::npos) found = true;
  }
  CHECK(found);
}

TEST_CASE("observability index values") {
  CHECK(observability_index(load_system(fixture("example4.json"))).n_o == 3);
  CHECK(observability_index(load_system(fixture("example3.json"))).n_o == 2);
  CHECK(observability_index(load_system(fixture("di_permuted.json"))).n_o == 2);
  CHECK(observability_index(load_system(fixture("di_canonical.json"))).n_o == 2);

  IndexResult e4 = observability_index(load_system(fixture("example4.json")));
  CHECK(e4.achieved_at_level == 2);
  IndexResult e3 = observability_index(load_system(fixture("example3.json")));
  CHECK(e3.achieved_at_level == 1);
}

TEST_CASE("index refuses unobservable systems") {
  CHECK_THROWS_AS(observability_index(load_system(fixture("nonobservable.json"))),
                  error);
  try {
    observability_index(load_system(fixture("nonobservable.json")));
  } catch (const error& e) {
    // The trdeg trajectory is part of the message.
    CHECK(std::string(e.what()).find("trajectory") != std::string::npos);
  }
}

TEST_CASE("subfield tower of the canonical double integrator") {
  RationalSystem di = load_system(fixture("di_canonical.json"));
  std::vector<std::string> warnings;
  auto tower = subfield_tower(di, &warnings);
  REQUIRE(tower.size() == 2);
  CHECK(warnings.empty());
  // Level 1 substitutes x2 = 0 into {x1, x2, 1}.
  REQUIRE(tower[0].size() == 3);
  CHECK(tower[0][0] == R("x1"));
  CHECK(tower[0][1].is_zero());
  CHECK(tower[0][2] == R("1"));
  // Level 2 keeps everything.
  CHECK(tower[1][1] == R("x2"));
}

TEST_CASE("subfield tower drops generators with vanishing denominators") {
  // h = 1/x2 blows up when the tower substitutes x2 = 0.
  std::vector<std::string> vars = kX12;
  RationalSystem system{Variety(2, {}),  vars,
                        {R("x2"), R("0")}, {R("0"), R("1")},
                        R("x1 + 1/x2"),  {Rat(0), Rat(1)},
                        {Rat(0), Rat(1)}, {true, true}};
  std::vector<std::string> warnings;
  auto tower = subfield_tower(system, &warnings);
  REQUIRE(tower.size() == 2);
  CHECK_FALSE(warnings.empty());
}
