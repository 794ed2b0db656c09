#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratsys/sysmodel.hpp"

namespace ratsys {

struct InputSegment {
  double value = 0.0;
  double duration = 0.0;
};

// u(t) constant on each segment, extended by the last value (0 when empty)
// past the end.
struct PiecewiseConstantInput {
  std::vector<InputSegment> segments;

  double value_at(double t) const;
  double total_duration() const;
};

enum class TrajectoryStatus { Completed, Blowup, DenominatorZero, LeftTolerance };

const char* trajectory_status_name(TrajectoryStatus status);

struct Trajectory {
  TrajectoryStatus status = TrajectoryStatus::Completed;
  // Horizon when completed, otherwise the localized event time.
  double stop_time = 0.0;
  std::string detail;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<double> outputs;
  double max_variety_residual = 0.0;
};

struct SimulateOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  // Scaled residual of the defining polynomials beyond which the trajectory
  // is declared off the variety.
  double variety_tol = 1e-7;
  // Checkpoint spacing; 0 records every accepted step instead.
  double sample_dt = 0.0;
  double blowup_norm = 1e12;
  double denominator_tol = 1e-10;
};

// Embedded Dormand-Prince 4(5) integration of dx/dt = f0(x) + u(t) f1(x)
// from the system's initial state. Every accepted step is monitored: state
// blowup, any system denominator reaching zero (sign changes are bisected to
// localize the crossing), and drift off the variety beyond variety_tol.
Trajectory simulate(const RationalSystem& system,
                    const PiecewiseConstantInput& input, double horizon,
                    const SimulateOptions& options = {});

struct ProbeReport {
  double max_deviation = 0.0;
  int trials = 0;
  int compared_trials = 0;  // trials where both trajectories completed
  std::vector<std::string> notes;
};

// Samples random piecewise-constant inputs (1..5 segments, values drawn from
// the first system's declared input set) and compares the two output
// responses on a common checkpoint grid of horizon/128. A trial where only
// one side completes counts as an infinite deviation.
ProbeReport response_equiv_probe(const RationalSystem& a,
                                 const RationalSystem& b, int trials,
                                 double horizon, std::uint64_t seed,
                                 const SimulateOptions& options = {});

}  // namespace ratsys
