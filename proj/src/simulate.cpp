#include "ratsys/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ratsys {

namespace {

struct PolyEval {
  std::vector<std::pair<Exps, double>> terms;

  static PolyEval compile(const Polynomial& p) {
    PolyEval e;
    for (const auto& [exps, coeff] : p.terms()) {
      e.terms.emplace_back(exps, coeff.get_d());
    }
    return e;
  }

  double at(const std::vector<double>& x) const {
    double total = 0.0;
    for (const auto& [exps, coeff] : terms) {
      double value = coeff;
      for (std::size_t i = 0; i < exps.size(); ++i) {
        for (int k = 0; k < exps[i]; ++k) value *= x[i];
      }
      total += value;
    }
    return total;
  }

  // Same evaluation with every coefficient and coordinate made nonnegative;
  // used as the scale of the residual test.
  double magnitude_at(const std::vector<double>& x) const {
    double total = 0.0;
    for (const auto& [exps, coeff] : terms) {
      double value = std::fabs(coeff);
      for (std::size_t i = 0; i < exps.size(); ++i) {
        for (int k = 0; k < exps[i]; ++k) value *= std::fabs(x[i]);
      }
      total += value;
    }
    return total;
  }
};

struct RatEval {
  PolyEval num;
  PolyEval den;

  static RatEval compile(const RationalFunction& r) {
    return {PolyEval::compile(r.numerator()), PolyEval::compile(r.denominator())};
  }

  double at(const std::vector<double>& x) const { return num.at(x) / den.at(x); }
};

struct CompiledSystem {
  int n = 0;
  std::vector<RatEval> f0;
  std::vector<RatEval> f1;
  RatEval h;
  std::vector<PolyEval> denominators;
  std::vector<PolyEval> variety;

  static CompiledSystem compile(const RationalSystem& system) {
    CompiledSystem c;
    c.n = system.n();
    for (const auto& r : system.f0) c.f0.push_back(RatEval::compile(r));
    for (const auto& r : system.f1) c.f1.push_back(RatEval::compile(r));
    c.h = RatEval::compile(system.h);
    for (const auto& q : system.denominators()) {
      c.denominators.push_back(PolyEval::compile(q));
    }
    for (const auto& p : system.X.ideal().generators()) {
      c.variety.push_back(PolyEval::compile(p));
    }
    return c;
  }

  bool rhs(const std::vector<double>& x, double u,
           std::vector<double>* out) const {
    for (int i = 0; i < n; ++i) {
      double value = f0[i].at(x) + u * f1[i].at(x);
      if (!std::isfinite(value)) return false;
      (*out)[i] = value;
    }
    return true;
  }
};

constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0,
                 kA63 = 46732.0 / 5247.0, kA64 = 49.0 / 176.0,
                 kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0,
                 kE4 = 71.0 / 1920.0, kE5 = -17253.0 / 339200.0,
                 kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

struct StepResult {
  bool finite = false;
  std::vector<double> y;
  double error = 0.0;
};

// One Dormand-Prince 4(5) step; finite = false when any stage blew through a
// pole or overflowed.
StepResult dp45_step(const CompiledSystem& sys, const std::vector<double>& y,
                     double u, double h) {
  const int n = sys.n;
  StepResult result;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), stage(n);

  auto combine = [&](std::initializer_list<std::pair<const std::vector<double>*, double>>
                         parts) {
    for (int i = 0; i < n; ++i) {
      double acc = y[i];
      for (const auto& [vec, w] : parts) acc += h * w * (*vec)[i];
      stage[i] = acc;
    }
  };

  if (!sys.rhs(y, u, &k1)) return result;
  combine({{&k1, kA21}});
  if (!sys.rhs(stage, u, &k2)) return result;
  combine({{&k1, kA31}, {&k2, kA32}});
  if (!sys.rhs(stage, u, &k3)) return result;
  combine({{&k1, kA41}, {&k2, kA42}, {&k3, kA43}});
  if (!sys.rhs(stage, u, &k4)) return result;
  combine({{&k1, kA51}, {&k2, kA52}, {&k3, kA53}, {&k4, kA54}});
  if (!sys.rhs(stage, u, &k5)) return result;
  combine({{&k1, kA61}, {&k2, kA62}, {&k3, kA63}, {&k4, kA64}, {&k5, kA65}});
  if (!sys.rhs(stage, u, &k6)) return result;
  combine({{&k1, kB1}, {&k3, kB3}, {&k4, kB4}, {&k5, kB5}, {&k6, kB6}});
  result.y = stage;
  if (!sys.rhs(result.y, u, &k7)) return result;

  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(result.y[i])) return result;
  }
  result.finite = true;
  result.error = 0.0;
  for (int i = 0; i < n; ++i) {
    double err = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                      kE6 * k6[i] + kE7 * k7[i]);
    result.error = std::max(result.error, std::fabs(err));
  }
  return result;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

double PiecewiseConstantInput::value_at(double t) const {
  if (segments.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& seg : segments) {
    acc += seg.duration;
    if (t < acc) return seg.value;
  }
  return segments.back().value;
}

double PiecewiseConstantInput::total_duration() const {
  double acc = 0.0;
  for (const auto& seg : segments) acc += seg.duration;
  return acc;
}

const char* trajectory_status_name(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::Completed: return "completed";
    case TrajectoryStatus::Blowup: return "blowup";
    case TrajectoryStatus::DenominatorZero: return "denominator_zero";
    case TrajectoryStatus::LeftTolerance: return "left_tolerance";
  }
  return "unknown";
}

Trajectory simulate(const RationalSystem& system,
                    const PiecewiseConstantInput& input, double horizon,
                    const SimulateOptions& options) {
  if (!(horizon > 0.0)) throw error("simulate: horizon must be positive");
  const CompiledSystem sys = CompiledSystem::compile(system);
  const int n = sys.n;

  std::vector<double> state(n);
  for (int i = 0; i < n; ++i) state[i] = system.x0[i].get_d();

  // Segment boundaries within the horizon, then the horizon itself.
  std::vector<double> boundaries;
  double acc = 0.0;
  for (const auto& seg : input.segments) {
    acc += seg.duration;
    if (acc >= horizon) break;
    boundaries.push_back(acc);
  }
  boundaries.push_back(horizon);

  Trajectory traj;
  traj.stop_time = horizon;

  double next_checkpoint =
      options.sample_dt > 0.0 ? options.sample_dt
                              : std::numeric_limits<double>::infinity();
  auto record = [&](double t, const std::vector<double>& y) {
    traj.times.push_back(t);
    traj.states.push_back(y);
    traj.outputs.push_back(sys.h.at(y));
  };
  record(0.0, state);

  auto denominator_value = [&](const std::vector<double>& y, std::size_t j) {
    return sys.denominators[j].at(y);
  };
  auto check_state = [&](double t, const std::vector<double>& y)
      -> std::optional<std::pair<TrajectoryStatus, std::string>> {
    if (inf_norm(y) > options.blowup_norm) {
      return std::make_pair(TrajectoryStatus::Blowup,
                            "state norm exceeded " +
                                std::to_string(options.blowup_norm));
    }
    for (std::size_t j = 0; j < sys.denominators.size(); ++j) {
      if (std::fabs(denominator_value(y, j)) < options.denominator_tol) {
        std::ostringstream detail;
        detail << "denominator " << (j + 1) << " reached zero";
        return std::make_pair(TrajectoryStatus::DenominatorZero, detail.str());
      }
    }
    for (std::size_t j = 0; j < sys.variety.size(); ++j) {
      double scale = 1.0 + sys.variety[j].magnitude_at(y);
      double residual = std::fabs(sys.variety[j].at(y)) / scale;
      traj.max_variety_residual = std::max(traj.max_variety_residual, residual);
      if (residual > options.variety_tol) {
        std::ostringstream detail;
        detail << "defining polynomial " << (j + 1)
               << " residual " << residual;
        return std::make_pair(TrajectoryStatus::LeftTolerance, detail.str());
      }
    }
    (void)t;
    return std::nullopt;
  };

  if (auto stop = check_state(0.0, state)) {
    traj.status = stop->first;
    traj.stop_time = 0.0;
    traj.detail = stop->second;
    return traj;
  }

  double t = 0.0;
  std::size_t boundary_index = 0;
  while (t < horizon) {
    double segment_end = boundaries[boundary_index];
    double u = input.value_at(0.5 * (t + segment_end));
    // Initial step independent of the tolerances so refinement studies see
    // strictly nested step sequences.
    double h = (segment_end - t) / 100.0;

    while (t < segment_end - 1e-15 * std::max(1.0, segment_end)) {
      double cap = std::min(segment_end, next_checkpoint);
      bool capped = cap - t <= h;
      double h_try = capped ? cap - t : h;

      StepResult step = dp45_step(sys, state, u, h_try);
      if (!step.finite) {
        h *= 0.5;
        if (h_try > 1e-14 * std::max(1.0, std::fabs(t)) && h > 1e-300) continue;
        // Cannot shrink further: classify by the nearest denominator.
        double nearest = std::numeric_limits<double>::infinity();
        std::size_t which = 0;
        for (std::size_t j = 0; j < sys.denominators.size(); ++j) {
          double v = std::fabs(denominator_value(state, j));
          if (v < nearest) {
            nearest = v;
            which = j;
          }
        }
        if (nearest < 1e-3) {
          traj.status = TrajectoryStatus::DenominatorZero;
          std::ostringstream detail;
          detail << "denominator " << (which + 1) << " reached zero";
          traj.detail = detail.str();
        } else {
          traj.status = TrajectoryStatus::Blowup;
          traj.detail = "state not representable past this time";
        }
        traj.stop_time = t;
        return traj;
      }

      double scale = options.atol +
                     options.rtol * std::max(inf_norm(state), inf_norm(step.y));
      double err_ratio = step.error / scale;
      if (err_ratio > 1.0) {
        double shrink = std::max(0.2, 0.9 * std::pow(err_ratio, -0.2));
        h = std::max(h_try * shrink, 1e-300);
        continue;
      }

      // Denominator sign change inside the accepted step: bisect to localize
      // the crossing before reporting.
      std::optional<std::size_t> crossed;
      for (std::size_t j = 0; j < sys.denominators.size(); ++j) {
        double before = denominator_value(state, j);
        double after = denominator_value(step.y, j);
        if (before * after < 0.0) {
          crossed = j;
          break;
        }
      }
      if (crossed) {
        double lo = 0.0, hi = h_try;
        for (int iter = 0; iter < 80 && hi - lo > 1e-15 * h_try; ++iter) {
          double mid = 0.5 * (lo + hi);
          StepResult probe = dp45_step(sys, state, u, mid);
          if (!probe.finite) {
            hi = mid;
            continue;
          }
          double v = denominator_value(probe.y, *crossed);
          if (v * denominator_value(state, *crossed) > 0.0 &&
              std::fabs(v) > options.denominator_tol) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        traj.status = TrajectoryStatus::DenominatorZero;
        traj.stop_time = t + 0.5 * (lo + hi);
        std::ostringstream detail;
        detail << "denominator " << (*crossed + 1) << " reached zero";
        traj.detail = detail.str();
        return traj;
      }

      double t_new = t + h_try;
      if (auto stop = check_state(t_new, step.y)) {
        traj.status = stop->first;
        traj.stop_time = t_new;
        traj.detail = stop->second;
        return traj;
      }

      t = t_new;
      state = step.y;
      bool at_checkpoint =
          options.sample_dt > 0.0 &&
          std::fabs(t - next_checkpoint) <= 1e-12 * std::max(1.0, t);
      if (options.sample_dt > 0.0) {
        if (at_checkpoint) {
          record(t, state);
          next_checkpoint += options.sample_dt;
        }
      } else {
        record(t, state);
      }

      if (!capped && err_ratio > 0.0) {
        double grow = std::min(5.0, 0.9 * std::pow(err_ratio, -0.2));
        h = h_try * std::max(0.2, grow);
      } else if (!capped) {
        h = h_try * 5.0;
      }
    }
    t = segment_end;
    ++boundary_index;
  }

  if (traj.times.empty() ||
      traj.times.back() < horizon - 1e-9 * std::max(1.0, horizon)) {
    record(horizon, state);
  }
  traj.status = TrajectoryStatus::Completed;
  traj.stop_time = horizon;
  return traj;
}

namespace {

std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

ProbeReport response_equiv_probe(const RationalSystem& a,
                                 const RationalSystem& b, int trials,
                                 double horizon, std::uint64_t seed,
                                 const SimulateOptions& options) {
  if (a.input_values.empty()) {
    throw error("response_equiv_probe: no input values declared");
  }
  std::vector<double> values;
  for (const auto& v : a.input_values) values.push_back(v.get_d());

  SimulateOptions run = options;
  run.sample_dt = horizon / 128.0;

  ProbeReport report;
  report.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    std::uint64_t stream = seed + 0x100000001b3ull * (trial + 1);
    int nseg = 1 + static_cast<int>(splitmix64_step(stream) % 5ull);
    std::vector<double> weights(nseg);
    double total = 0.0;
    for (double& w : weights) {
      double frac =
          (splitmix64_step(stream) >> 11) * (1.0 / 9007199254740992.0);
      w = 0.2 + frac;
      total += w;
    }
    PiecewiseConstantInput input;
    for (int k = 0; k < nseg; ++k) {
      double value = values[splitmix64_step(stream) % values.size()];
      input.segments.push_back({value, horizon * weights[k] / total});
    }

    Trajectory ta = simulate(a, input, horizon, run);
    Trajectory tb = simulate(b, input, horizon, run);
    bool a_done = ta.status == TrajectoryStatus::Completed;
    bool b_done = tb.status == TrajectoryStatus::Completed;
    if (a_done != b_done) {
      report.max_deviation = std::numeric_limits<double>::infinity();
      std::ostringstream note;
      note << "trial " << trial << ": statuses differ ("
           << trajectory_status_name(ta.status) << " vs "
           << trajectory_status_name(tb.status) << ")";
      report.notes.push_back(note.str());
      continue;
    }
    if (!a_done) {
      std::ostringstream note;
      note << "trial " << trial << ": both stopped early ("
           << trajectory_status_name(ta.status) << " at " << ta.stop_time
           << ", " << trajectory_status_name(tb.status) << " at "
           << tb.stop_time << "); compared the shared prefix";
      report.notes.push_back(note.str());
    }
    std::size_t shared = std::min(ta.outputs.size(), tb.outputs.size());
    for (std::size_t k = 0; k < shared; ++k) {
      report.max_deviation = std::max(
          report.max_deviation, std::fabs(ta.outputs[k] - tb.outputs[k]));
    }
    ++report.compared_trials;
  }
  return report;
}

}  // namespace ratsys
