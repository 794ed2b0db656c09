#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "ratsys/exprio.hpp"
#include "ratsys/simulate.hpp"

using namespace ratsys;

namespace {

std::string fixture(const char* name) {
  return std::string(FIXTURES_DIR) + "/" + name;
}

const std::vector<std::string> kX1{"x1"};
const std::vector<std::string> kX12{"x1", "x2"};

RationalFunction R1(const char* text) { return parse_rational(text, kX1); }
RationalFunction R2(const char* text) { return parse_rational(text, kX12); }

// dx/dt = u, y = x, x(0) = 0.
RationalSystem integrator() {
  return RationalSystem{Variety(1, {}), kX1,      {R1("0")}, {R1("1")},
                        R1("x1"),       {Rat(0)}, {Rat(0), Rat(1)},
                        {true, true}};
}

}  // namespace

TEST_CASE("piecewise input lookup") {
  PiecewiseConstantInput input{{{1.0, 0.5}, {-2.0, 0.25}}};
  CHECK(input.total_duration() == doctest::Approx(0.75));
  CHECK(input.value_at(0.0) == 1.0);
  CHECK(input.value_at(0.49) == 1.0);
  CHECK(input.value_at(0.6) == -2.0);
  CHECK(input.value_at(5.0) == -2.0);
  PiecewiseConstantInput empty;
  CHECK(empty.value_at(1.0) == 0.0);
  CHECK(empty.total_duration() == 0.0);
}

TEST_CASE("status names") {
  CHECK(std::string(trajectory_status_name(TrajectoryStatus::Completed)) ==
        "completed");
  CHECK(std::string(trajectory_status_name(TrajectoryStatus::Blowup)) ==
        "blowup");
  CHECK(std::string(trajectory_status_name(TrajectoryStatus::DenominatorZero)) ==
        "denominator_zero");
  CHECK(std::string(trajectory_status_name(TrajectoryStatus::LeftTolerance)) ==
        "left_tolerance");
}

TEST_CASE("pure integrator is exact") {
  Trajectory t = simulate(integrator(), {{{1.0, 1.0}}}, 1.0);
  REQUIRE(t.status == TrajectoryStatus::Completed);
  CHECK(t.stop_time == doctest::Approx(1.0));
  CHECK(std::abs(t.outputs.back() - 1.0) < 1e-12);
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() == doctest::Approx(1.0));
  REQUIRE(t.states.back().size() == 1);
  CHECK(t.states.back()[0] == doctest::Approx(t.outputs.back()));
}

TEST_CASE("piecewise input switches mid-run") {
  Trajectory t = simulate(integrator(), {{{1.0, 0.5}, {-1.0, 0.5}}}, 1.0);
  REQUIRE(t.status == TrajectoryStatus::Completed);
  CHECK(std::abs(t.outputs.back()) < 1e-12);
  // The ramp peaks exactly at the breakpoint.
  double peak = 0.0;
  for (double y : t.outputs) peak = std::max(peak, y);
  CHECK(peak == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("drift-only fixture gives a linear output") {
  RationalSystem e3 = load_system(fixture("example3.json"));
  Trajectory t = simulate(e3, {}, 2.0);
  REQUIRE(t.status == TrajectoryStatus::Completed);
  // x0 = (0, 1), u = 0: x1(t) = t.
  CHECK(std::abs(t.outputs.back() - 2.0) < 1e-9);
}

TEST_CASE("checkpoint grid is honored") {
  SimulateOptions options;
  options.sample_dt = 0.5;
  Trajectory t = simulate(integrator(), {{{1.0, 2.0}}}, 2.0, options);
  REQUIRE(t.status == TrajectoryStatus::Completed);
  REQUIRE(t.times.size() == 5);
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    CHECK(t.times[i] == doctest::Approx(0.5 * static_cast<double>(i)));
    CHECK(t.outputs[i] == doctest::Approx(0.5 * static_cast<double>(i)));
  }
}

TEST_CASE("denominator crossing is localized") {
  RationalSystem system = load_system(fixture("denominator_zero.json"));
  Trajectory t = simulate(system, {}, 2.0);
  REQUIRE(t.status == TrajectoryStatus::DenominatorZero);
  // x(t) = 1 - t, h = 1/x: the pole sits at t = 1.
  CHECK(std::abs(t.stop_time - 1.0) < 1e-3);
  CHECK(t.stop_time <= 2.0);
  CHECK_FALSE(t.detail.empty());
}

TEST_CASE("finite escape is reported as blowup") {
  // dx/dt = x^2 from x(0) = 1 escapes at t = 1.
  RationalSystem system{Variety(1, {}), kX1,      {R1("x1^2")}, {R1("0")},
                        R1("x1"),       {Rat(1)}, {Rat(0), Rat(1)},
                        {true, true}};
  Trajectory t = simulate(system, {}, 2.0);
  REQUIRE(t.status == TrajectoryStatus::Blowup);
  CHECK(t.stop_time > 0.9);
  CHECK(t.stop_time < 1.1);
}

TEST_CASE("rotation stays on the circle") {
  RationalSystem circle = load_system(fixture("circle.json"));
  double horizon = 2.0 * 3.14159265358979323846;
  Trajectory t = simulate(circle, {}, horizon);
  REQUIRE(t.status == TrajectoryStatus::Completed);
  CHECK(t.max_variety_residual < 1e-7);
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    CHECK(std::abs(t.outputs[i] - std::cos(t.times[i])) < 1e-6);
  }
}

TEST_CASE("leaving the variety is detected") {
  // Constant drift pushes straight off the circle.
  std::vector<Polynomial> circle{parse_polynomial("x1^2 + x2^2 - 1", kX12)};
  RationalSystem system{Variety(2, circle), kX12,
                        {R2("1"), R2("0")},  {R2("0"), R2("0")},
                        R2("x1"),            {Rat(1), Rat(0)},
                        {Rat(0), Rat(1)},    {true, true}};
  Trajectory t = simulate(system, {}, 1.0);
  REQUIRE(t.status == TrajectoryStatus::LeftTolerance);
  CHECK(t.stop_time < 1.0);
  CHECK(t.max_variety_residual > 1e-7);
}

TEST_CASE("probe equates the two double integrators") {
  RationalSystem a = load_system(fixture("di_permuted.json"));
  RationalSystem b = load_system(fixture("di_canonical.json"));
  b.x0 = {a.x0[1], a.x0[0]};  // align the initial outputs
  ProbeReport report = response_equiv_probe(a, b, 10, 2.0, 99);
  CHECK(report.trials == 10);
  CHECK(report.compared_trials == 10);
  CHECK(report.max_deviation < 1e-6);
}

TEST_CASE("probe flags a miscalibrated gain") {
  RationalSystem a = integrator();
  RationalSystem b = integrator();
  b.f1[0] = R1("101/100");
  ProbeReport report = response_equiv_probe(a, b, 10, 2.0, 99);
  CHECK(report.max_deviation > 1e-3);
}

TEST_CASE("probe of a system against itself is exactly zero") {
  RationalSystem e3 = load_system(fixture("example3.json"));
  ProbeReport report = response_equiv_probe(e3, e3, 5, 2.0, 7);
  CHECK(report.max_deviation == 0.0);
  CHECK(report.compared_trials == 5);
}

TEST_CASE("probe is deterministic in the seed") {
  RationalSystem a = integrator();
  RationalSystem b = integrator();
  b.f1[0] = R1("2");
  ProbeReport r1 = response_equiv_probe(a, b, 8, 1.0, 1234);
  ProbeReport r2 = response_equiv_probe(a, b, 8, 1.0, 1234);
  CHECK(r1.max_deviation == r2.max_deviation);
  CHECK(r1.compared_trials == r2.compared_trials);
}

TEST_CASE("probe reports a status mismatch as infinite deviation") {
  RationalSystem healthy = integrator();
  RationalSystem pole = load_system(fixture("denominator_zero.json"));
  ProbeReport report = response_equiv_probe(healthy, pole, 4, 2.0, 5);
  CHECK(std::isinf(report.max_deviation));
  CHECK(report.compared_trials < report.trials);
  CHECK_FALSE(report.notes.empty());
}

TEST_CASE("error tightens with the tolerance") {
  // Nonlinear enough that RK steps are inexact: dx/dt = x, x(0) = 1.
  RationalSystem system{Variety(1, {}), kX1,      {R1("x1")}, {R1("0")},
                        R1("x1"),       {Rat(1)}, {Rat(0), Rat(1)},
                        {true, true}};
  double previous = std::numeric_limits<double>::infinity();
  for (double rtol : {1e-6, 1e-9, 1e-12}) {
    SimulateOptions options;
    options.rtol = rtol;
    Trajectory t = simulate(system, {}, 1.0, options);
    REQUIRE(t.status == TrajectoryStatus::Completed);
    double err = std::abs(t.outputs.back() - std::exp(1.0));
    CHECK(err <= previous);
    previous = err;
  }
  CHECK(previous < 1e-10);
}
