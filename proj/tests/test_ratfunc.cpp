#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ratsys/exprio.hpp"
#include "ratsys/ratfunc.hpp"

using namespace ratsys;

namespace {

const std::vector<std::string> kXY{"x", "y"};
const std::vector<std::string> kX12{"x1", "x2"};

Polynomial P(const char* text) { return parse_polynomial(text, kXY); }
RationalFunction R(const char* text) { return parse_rational(text, kXY); }

}  // namespace

TEST_CASE("canonical form scales the denominator") {
  // Denominator without constant term: leading coefficient becomes 1.
  RationalFunction a(P("x"), P("3*y"));
  CHECK(a.numerator() == P("x/3"));
  CHECK(a.denominator() == P("y"));

  // Denominator with nonzero constant term: that term becomes 1.
  RationalFunction b(P("x"), P("2 + 2*x"));
  CHECK(b.numerator() == P("x/2"));
  CHECK(b.denominator() == P("x + 1"));
}

TEST_CASE("common factors are cancelled") {
  RationalFunction r(P("x^2 - 1"), P("x - 1"));
  CHECK(r.is_polynomial());
  CHECK(r.numerator() == P("x + 1"));

  RationalFunction s(P("x^2*y"), P("x*y^2"));
  CHECK(s.numerator() == P("x"));
  CHECK(s.denominator() == P("y"));
}

TEST_CASE("zero and constants") {
  RationalFunction z(Polynomial::zero(2), P("x"));
  CHECK(z.is_zero());
  CHECK(z.denominator().is_one());
  CHECK(RationalFunction::constant(2, Rat(5, 3)).is_constant());
  CHECK_THROWS_AS(RationalFunction(P("x"), Polynomial::zero(2)), error);
}

TEST_CASE("field arithmetic") {
  CHECK(R("1/x") + R("1/y") == R("(x + y)/(x*y)"));
  CHECK(R("x/y") * R("y/x") == R("1"));
  CHECK(R("x") - R("x") == RationalFunction::zero(2));
  CHECK(R("x/y") / R("x") == R("1/y"));
  CHECK_THROWS_AS(R("x") / RationalFunction::zero(2), error);
  CHECK(R("x/(1 + x)").pow(2) == R("x^2/(1 + 2*x + x^2)"));
  CHECK(-R("x/y") == R("(0 - x)/y"));
}

TEST_CASE("canonical equality is structural") {
  CHECK(R("(2*x)/(2*y)") == R("x/y"));
  CHECK(R("(x^2 - y^2)/(x + y)") == R("x - y"));
  CHECK(R("x/y") != R("y/x"));
}

TEST_CASE("derivatives use the quotient rule") {
  CHECK(R("1/x").derivative(0) == R("-1/x^2"));
  CHECK(R("x^2").derivative(0) == R("2*x"));
  CHECK(R("x/y").derivative(1) == R("-x/y^2"));
  CHECK(R("y/(1 + x^2)").derivative(0) == R("(-2*x*y)/(1 + 2*x^2 + x^4)"));
}

TEST_CASE("evaluation guards the denominator") {
  RationalFunction r = R("x/(x - y)");
  CHECK(r.evaluate({Rat(3), Rat(1)}) == Rat(3, 2));
  CHECK(r.denominator_vanishes_at({Rat(1), Rat(1)}));
  CHECK_THROWS_AS(r.evaluate({Rat(1), Rat(1)}), error);
}

TEST_CASE("substitution composes through field arithmetic") {
  std::vector<std::string> t{"t"};
  RationalFunction t2 = parse_rational("t^2", t);
  RationalFunction t3 = parse_rational("t^3", t);
  CHECK(R("x/y").substituted({t2, t3}) == parse_rational("1/t", t));

  // A composed numerator that cancels to zero is just the zero function.
  CHECK(R("x - y").substituted({t2, t2}).is_zero());

  // Identically vanishing composed denominator is an error.
  RationalFunction zero_den = parse_rational("t - t", t);
  CHECK_THROWS_AS(R("1/x").substituted({zero_den, zero_den}), error);
}

TEST_CASE("extension keeps values") {
  RationalFunction r = R("x/(1 + y)");
  RationalFunction ext = r.extended(3);
  CHECK(ext.nvars() == 3);
  CHECK(ext.evaluate({Rat(2), Rat(1), Rat(9)}) == 1);
}

TEST_CASE("drift chain of the polynomial example") {
  std::vector<std::string> vars = kX12;
  auto F = [&](const char* s) { return parse_rational(s, vars); };
  VectorField f0{F("x1 - x2^2 + x2"), F("x2")};
  RationalFunction b1 = F("x1");
  RationalFunction b2 = lie_derivative(b1, f0);
  RationalFunction b3 = lie_derivative(b2, f0);
  RationalFunction b4 = lie_derivative(b3, f0);
  CHECK(b2 == F("x1 - x2^2 + x2"));
  CHECK(b3 == F("x1 - 3*x2^2 + 2*x2"));
  CHECK(b4 == F("x1 - 7*x2^2 + 3*x2"));
}

TEST_CASE("lie derivative along a rational field") {
  std::vector<std::string> vars = kX12;
  auto F = [&](const char* s) { return parse_rational(s, vars); };
  VectorField f1{F("0"), F("-x2/(1 + x1^2)")};
  CHECK(lie_derivative(F("x2"), f1) == F("-x2/(1 + x1^2)"));
  CHECK(lie_derivative(F("x1"), f1).is_zero());
  CHECK(lie_derivative(F("5"), f1).is_zero());
}
