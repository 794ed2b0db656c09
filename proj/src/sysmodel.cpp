#include "ratsys/sysmodel.hpp"

#include <algorithm>
#include <random>

namespace ratsys {

Variety::Variety(int nvars, std::vector<Polynomial> defining,
                 std::optional<Parametrization> parametrization)
    : defining_(nvars, std::move(defining)),
      parametrization_(std::move(parametrization)) {
  for (const auto& g : defining_.generators()) {
    if (!g.is_zero() && g.is_constant()) {
      throw error("variety defined by a nonzero constant is empty");
    }
  }
  if (parametrization_) {
    if (static_cast<int>(parametrization_->images.size()) != nvars) {
      throw error("parametrization image count must match ambient arity");
    }
    int d = parametrization_->parameter_count();
    for (const auto& im : parametrization_->images) {
      if (im.nvars() != d) throw error("parametrization image arity mismatch");
    }
  }
}

int Variety::dim(const Budget& budget) const {
  return ideal_dimension(defining_, budget);
}

bool Variety::is_coordinate_subspace(std::vector<int>* zeroed) const {
  std::vector<int> vars;
  for (const auto& g : defining_.generators()) {
    if (g.terms().size() != 1) return false;
    const Exps& e = g.terms().begin()->first;
    int support = -1;
    for (int i = 0; i < nvars(); ++i) {
      if (e[i] > 0) {
        if (support >= 0) return false;
        support = i;
      }
    }
    if (support < 0) return false;
    vars.push_back(support);
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (zeroed) *zeroed = std::move(vars);
  return true;
}

bool Variety::contains(const std::vector<Rat>& point) const {
  for (const auto& g : defining_.generators()) {
    if (g.evaluate(point) != 0) return false;
  }
  return true;
}

bool RationalSystem::input_free() const {
  return std::all_of(f1.begin(), f1.end(),
                     [](const RationalFunction& c) { return c.is_zero(); });
}

std::vector<Polynomial> RationalSystem::denominators() const {
  std::vector<Polynomial> out;
  auto push = [&](const RationalFunction& r) {
    if (!r.denominator().is_constant()) out.push_back(r.denominator());
  };
  for (const auto& c : f0) push(c);
  for (const auto& c : f1) push(c);
  push(h);
  return out;
}

ValidationReport validate_system(const RationalSystem& system,
                                 const Budget& budget) {
  ValidationReport report;
  auto violation = [&](const std::string& msg) {
    report.violations.push_back(msg);
  };
  int n = system.n();
  if (n < 1) violation("state dimension must be at least 1");
  if (static_cast<int>(system.variables.size()) != n) {
    violation("variable name count does not match ambient dimension");
  }
  if (static_cast<int>(system.f0.size()) != n) violation("f0 arity mismatch");
  if (static_cast<int>(system.f1.size()) != n) violation("f1 arity mismatch");
  if (static_cast<int>(system.x0.size()) != n) violation("x0 arity mismatch");
  if (!report.violations.empty()) return report;

  // Proper defining ideal.
  bool proper = true;
  try {
    if (!system.X.is_full_space() &&
        system.X.ideal()
            .basis(MonomialOrder::graded_lex(), budget)
            .is_trivial_unit()) {
      violation("defining ideal is the unit ideal (empty variety)");
      proper = false;
    }
  } catch (const budget_error& e) {
    report.caveats.push_back(std::string("ideal properness not decided: ") +
                             e.what());
  }

  if (!system.X.contains(system.x0)) {
    violation("initial state does not lie on the variety");
  }

  auto check_function = [&](const RationalFunction& r, const std::string& where) {
    if (system.X.contains(system.x0) && r.denominator_vanishes_at(system.x0)) {
      violation("denominator of " + where + " vanishes at the initial state");
    }
    if (!proper || r.denominator().is_constant()) return;
    try {
      if (vanishes_on_variety(r.denominator(), system.X.ideal(), budget)) {
        violation("denominator of " + where +
                  " vanishes identically on the variety");
      }
    } catch (const budget_error& e) {
      report.caveats.push_back("denominator check for " + where +
                               " not decided: " + e.what());
    }
  };
  for (int i = 0; i < n; ++i) {
    check_function(system.f0[i], "f0[" + std::to_string(i) + "]");
    check_function(system.f1[i], "f1[" + std::to_string(i) + "]");
  }
  check_function(system.h, "h");

  bool has_zero = false;
  std::vector<Rat> distinct;
  for (const auto& v : system.input_values) {
    if (v == 0) has_zero = true;
    if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) {
      distinct.push_back(v);
    }
  }
  if (!has_zero) violation("input value set must contain 0");
  if (distinct.size() < 2) {
    violation("input value set must contain at least two distinct values");
  }

  report.caveats.push_back(
      "irreducibility of the variety is assumed, not verified");
  return report;
}

namespace {

Rat random_rational(std::mt19937_64& rng, long bound) {
  // Hand-rolled mappings keep the stream identical across standard libraries.
  long span = 2 * bound + 1;
  long num = static_cast<long>(rng() % static_cast<std::uint64_t>(span)) - bound;
  long den = static_cast<long>(rng() % static_cast<std::uint64_t>(bound)) + 1;
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

SamplePoint sample_point(const Variety& variety, std::uint64_t seed,
                         long bound) {
  if (bound < 1) throw error("sample bound must be positive");
  std::mt19937_64 rng(seed);
  int n = variety.nvars();

  if (variety.parametrization()) {
    const auto& par = *variety.parametrization();
    int d = par.parameter_count();
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<Rat> params(d);
      for (auto& p : params) p = random_rational(rng, bound);
      bool ok = true;
      std::vector<Rat> point(n);
      for (int i = 0; i < n && ok; ++i) {
        if (par.images[i].denominator_vanishes_at(params)) {
          ok = false;
        } else {
          point[i] = par.images[i].evaluate(params);
        }
      }
      if (ok) {
        bool on = variety.contains(point);
        return SamplePoint{std::move(point), on};
      }
    }
    throw error("sample_point: parametrization denominators kept vanishing");
  }

  if (variety.is_full_space()) {
    std::vector<Rat> point(n);
    for (auto& c : point) c = random_rational(rng, bound);
    return SamplePoint{std::move(point), true};
  }

  std::vector<int> zeroed;
  if (variety.is_coordinate_subspace(&zeroed)) {
    std::vector<Rat> point(n);
    std::size_t zi = 0;
    for (int i = 0; i < n; ++i) {
      if (zi < zeroed.size() && zeroed[zi] == i) {
        point[i] = Rat(0);
        ++zi;
      } else {
        point[i] = random_rational(rng, bound);
      }
    }
    return SamplePoint{std::move(point), true};
  }

  throw error(
      "sample_point supports full space, coordinate subspaces, and "
      "parametrized varieties only");
}

std::vector<VectorField> alpha_fields(const RationalSystem& system) {
  std::vector<VectorField> fields;
  fields.reserve(system.input_values.size());
  for (const auto& alpha : system.input_values) {
    VectorField f;
    f.reserve(system.f0.size());
    for (std::size_t i = 0; i < system.f0.size(); ++i) {
      f.push_back(system.f0[i] + system.f1[i].scaled(alpha));
    }
    fields.push_back(std::move(f));
  }
  return fields;
}

}  // namespace ratsys
