#include "ratsys/obsfield.hpp"

#include <algorithm>

namespace ratsys {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d649bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<RationalFunction> GeneratorChain::flattened() const {
  std::vector<RationalFunction> out;
  for (const auto& level : levels) {
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::size_t GeneratorChain::size() const {
  std::size_t n = 0;
  for (const auto& level : levels) n += level.size();
  return n;
}

bool GeneratorChain::contains(const RationalFunction& r) const {
  for (const auto& level : levels) {
    for (const auto& g : level) {
      if (g == r) return true;
    }
  }
  return false;
}

namespace {

// New nonzero derivatives of `previous`, deduplicated against `chain` and
// among themselves, in the order (L_f0 g, L_f1 g) per g.
std::vector<RationalFunction> derive_level(
    const GeneratorChain& chain, const std::vector<RationalFunction>& previous,
    const RationalSystem& system) {
  std::vector<RationalFunction> next;
  for (const auto& g : previous) {
    for (const VectorField* field : {&system.f0, &system.f1}) {
      RationalFunction d = lie_derivative(g, *field);
      if (d.is_zero()) continue;
      if (chain.contains(d)) continue;
      if (std::find(next.begin(), next.end(), d) != next.end()) continue;
      next.push_back(std::move(d));
    }
  }
  return next;
}

}  // namespace

GeneratorChain generator_chain(const RationalSystem& system, int k_max) {
  if (k_max < 0) throw error("k_max must be nonnegative");
  GeneratorChain chain;
  chain.levels.emplace_back();
  if (!system.h.is_zero()) chain.levels[0].push_back(system.h);
  for (int k = 1; k <= k_max; ++k) {
    auto next = derive_level(chain, chain.levels.back(), system);
    chain.levels.push_back(std::move(next));
  }
  return chain;
}

int trdeg_exact(const std::vector<RationalFunction>& generators,
                const Variety& variety, const Budget& budget) {
  int m = static_cast<int>(generators.size());
  if (m == 0) return 0;
  int n = variety.nvars();
  int total = n + m;

  std::vector<Polynomial> gens;
  for (const auto& g : variety.ideal().generators()) {
    gens.push_back(g.extended(total));
  }
  Polynomial den_product = Polynomial::constant(total, Rat(1));
  for (int i = 0; i < m; ++i) {
    const Polynomial p = generators[i].numerator().extended(total);
    const Polynomial q = generators[i].denominator().extended(total);
    gens.push_back(q * Polynomial::variable(total, n + i) - p);
    if (!generators[i].denominator().is_constant()) den_product = den_product * q;
  }
  Ideal graph(total, std::move(gens));
  if (!den_product.is_constant()) graph = saturate(graph, den_product, budget);

  std::vector<int> keep(m);
  for (int i = 0; i < m; ++i) keep[i] = n + i;
  Ideal image = restrict_ideal(eliminate(graph, keep, budget), keep);
  return ideal_dimension(image, budget);
}

namespace {

int rational_matrix_rank(std::vector<std::vector<Rat>> m) {
  if (m.empty()) return 0;
  std::size_t rows = m.size();
  std::size_t cols = m[0].size();
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t pivot = row;
    while (pivot < rows && m[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[row]);
    for (std::size_t r = row + 1; r < rows; ++r) {
      if (m[r][col] == 0) continue;
      Rat factor = m[r][col] / m[row][col];
      for (std::size_t c = col; c < cols; ++c) {
        m[r][c] -= factor * m[row][c];
      }
    }
    ++row;
    ++rank;
  }
  return rank;
}

// Parameter space description for the Jacobian path: images of the ambient
// coordinates as rational functions of d parameters.
struct ParamSpace {
  int d = 0;
  std::vector<RationalFunction> images;  // size = ambient nvars, arity d
  bool identity = false;
};

ParamSpace parameter_space(const Variety& variety) {
  int n = variety.nvars();
  ParamSpace out;
  if (variety.parametrization()) {
    out.d = variety.parametrization()->parameter_count();
    out.images = variety.parametrization()->images;
    return out;
  }
  if (variety.is_full_space()) {
    out.d = n;
    out.identity = true;
    for (int i = 0; i < n; ++i) out.images.push_back(RationalFunction::variable(n, i));
    return out;
  }
  std::vector<int> zeroed;
  if (variety.is_coordinate_subspace(&zeroed)) {
    out.d = n - static_cast<int>(zeroed.size());
    std::size_t zi = 0;
    int param = 0;
    for (int i = 0; i < n; ++i) {
      if (zi < zeroed.size() && zeroed[zi] == i) {
        out.images.push_back(RationalFunction::zero(out.d));
        ++zi;
      } else {
        out.images.push_back(RationalFunction::variable(out.d, param++));
      }
    }
    return out;
  }
  throw error(
      "trdeg_jacobian needs a full space, coordinate subspace, or "
      "parametrized variety");
}

// Partial derivatives evaluated through the quotient rule at sample points;
// the symbolically reduced derivatives are never needed here.
struct QuotientJet {
  Polynomial num, den;
  std::vector<Polynomial> dnum, dden;
};

QuotientJet make_jet(const RationalFunction& r, int vars) {
  QuotientJet jet{r.numerator(), r.denominator(), {}, {}};
  for (int j = 0; j < vars; ++j) {
    jet.dnum.push_back(jet.num.differentiate(j));
    jet.dden.push_back(jet.den.differentiate(j));
  }
  return jet;
}

// Gradient at pt; the caller has checked that den(pt) != 0.
std::vector<Rat> jet_gradient(const QuotientJet& jet,
                              const std::vector<Rat>& pt) {
  Rat p = jet.num.evaluate(pt);
  Rat q = jet.den.evaluate(pt);
  Rat qq = q * q;
  std::vector<Rat> out;
  out.reserve(jet.dnum.size());
  for (std::size_t j = 0; j < jet.dnum.size(); ++j) {
    Rat v = (jet.dnum[j].evaluate(pt) * q - p * jet.dden[j].evaluate(pt)) / qq;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

int trdeg_jacobian(const std::vector<RationalFunction>& generators,
                   const Variety& variety, int trials, std::uint64_t seed) {
  if (generators.empty()) return 0;
  if (trials < 1) throw error("trdeg_jacobian needs at least one trial");
  int n = variety.nvars();
  ParamSpace space = parameter_space(variety);

  std::vector<QuotientJet> gjets;
  gjets.reserve(generators.size());
  for (const auto& g : generators) gjets.push_back(make_jet(g, n));
  std::vector<QuotientJet> phijets;
  if (!space.identity) {
    phijets.reserve(space.images.size());
    for (const auto& im : space.images) phijets.push_back(make_jet(im, space.d));
  }

  int best = 0;
  std::uint64_t stream = seed;
  for (int trial = 0; trial < trials; ++trial) {
    bool done = false;
    for (int attempt = 0; attempt < 20 && !done; ++attempt) {
      stream = splitmix64(stream + 1);
      std::uint64_t word = stream;
      auto next = [&word]() {
        word = splitmix64(word);
        return word;
      };
      std::vector<Rat> params(space.d);
      for (auto& p : params) {
        long num = static_cast<long>(next() % 101ull) - 50;
        long den = static_cast<long>(next() % 8ull) + 1;
        p = Rat(num, den);
        p.canonicalize();
      }
      std::vector<Rat> point(n);
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        if (space.images[i].denominator_vanishes_at(params)) {
          ok = false;
        } else {
          point[i] = space.images[i].evaluate(params);
        }
      }
      for (std::size_t i = 0; i < generators.size() && ok; ++i) {
        if (generators[i].denominator_vanishes_at(point)) ok = false;
      }
      if (!ok) continue;

      std::vector<std::vector<Rat>> jac(generators.size(),
                                        std::vector<Rat>(space.d, Rat(0)));
      std::vector<std::vector<Rat>> dphi_at(space.identity ? 0 : n);
      for (std::size_t j = 0; j < dphi_at.size(); ++j) {
        dphi_at[j] = jet_gradient(phijets[j], params);
      }
      for (std::size_t i = 0; i < generators.size(); ++i) {
        std::vector<Rat> grad = jet_gradient(gjets[i], point);
        if (space.identity) {
          jac[i] = std::move(grad);
          continue;
        }
        for (int k = 0; k < space.d; ++k) {
          Rat sum(0);
          for (int j = 0; j < n; ++j) sum += grad[j] * dphi_at[j][k];
          jac[i][k] = sum;
        }
      }
      best = std::max(best, rational_matrix_rank(std::move(jac)));
      done = true;
    }
    if (!done) {
      throw error("trdeg_jacobian: sample retry budget exhausted");
    }
  }
  return best;
}

namespace {

// p with the two ambient copies swapped inside the doubled 2n-variable ring.
Polynomial swap_copies(const Polynomial& p_doubled, int n) {
  std::vector<int> where(2 * n);
  for (int i = 0; i < n; ++i) {
    where[i] = n + i;
    where[n + i] = i;
  }
  return p_doubled.permuted(where);
}

// The doubled generic-fiber ideal of the generator list over X, saturated by
// every denominator at both copies and by `extra` (also at both copies).
Ideal fiber_ideal(const std::vector<RationalFunction>& generators,
                  const Variety& variety, const Polynomial& extra_denominator,
                  const Budget& budget) {
  int n = variety.nvars();
  int total = 2 * n;
  std::vector<Polynomial> gens;
  for (const auto& g : variety.ideal().generators()) {
    Polynomial e = g.extended(total);
    gens.push_back(e);
    gens.push_back(swap_copies(e, n));
  }
  Polynomial den_product = Polynomial::constant(total, Rat(1));
  for (const auto& g : generators) {
    Polynomial p = g.numerator().extended(total);
    Polynomial q = g.denominator().extended(total);
    gens.push_back(p * swap_copies(q, n) - swap_copies(p, n) * q);
    if (!g.denominator().is_constant()) {
      den_product = den_product * q * swap_copies(q, n);
    }
  }
  if (!extra_denominator.is_constant()) {
    Polynomial e = extra_denominator.extended(total);
    den_product = den_product * e * swap_copies(e, n);
  }
  Ideal fiber(total, std::move(gens));
  if (!den_product.is_constant()) fiber = saturate(fiber, den_product, budget);
  return fiber;
}

}  // namespace

bool field_membership(const RationalFunction& f,
                      const std::vector<RationalFunction>& generators,
                      const Variety& variety, const Budget& budget) {
  if (f.nvars() != variety.nvars()) throw error("field_membership arity mismatch");
  if (f.is_constant()) return true;
  for (const auto& g : generators) {
    if (g == f) return true;
  }
  int n = variety.nvars();
  Ideal fiber = fiber_ideal(generators, variety, f.denominator(), budget);
  Polynomial p = f.numerator().extended(2 * n);
  Polynomial q = f.denominator().extended(2 * n);
  Polynomial difference = p * swap_copies(q, n) - swap_copies(p, n) * q;
  return ideal_contains(fiber, difference, budget);
}

namespace {

struct Growth {
  GeneratorChain chain;
  std::vector<int> trdeg_trajectory;
  bool stabilized = false;
  std::vector<std::string> caveats;
};

// The jacobian probe needs sample points; general hypersurfaces without a
// parametrization fall back to the exact method.
TrdegMethod effective_method(const RationalSystem& system,
                             const ObsOptions& options) {
  if (options.method == TrdegMethod::JacobianProbabilistic &&
      !system.X.is_full_space() && !system.X.parametrization().has_value() &&
      !system.X.is_coordinate_subspace()) {
    return TrdegMethod::EliminationExact;
  }
  return options.method;
}

int chain_trdeg(const std::vector<RationalFunction>& gens,
                const RationalSystem& system, const ObsOptions& options,
                const Budget& budget, int level) {
  if (options.method == TrdegMethod::EliminationExact) {
    return trdeg_exact(gens, system.X, budget);
  }
  return trdeg_jacobian(gens, system.X, options.trials,
                        splitmix64(options.seed) ^ static_cast<std::uint64_t>(level));
}

Growth grow_chain(const RationalSystem& system, const ObsOptions& options_in,
                  const Budget& budget) {
  Growth growth;
  ObsOptions options = options_in;
  options.method = effective_method(system, options_in);
  if (options.method != options_in.method) {
    growth.caveats.push_back(
        "variety cannot be sampled; transcendence degrees computed by exact "
        "elimination instead of the jacobian probe");
  }
  growth.chain.levels.emplace_back();
  if (!system.h.is_zero()) growth.chain.levels[0].push_back(system.h);
  growth.trdeg_trajectory.push_back(chain_trdeg(
      growth.chain.flattened(), system, options, budget, 0));

  for (int k = 1; k <= options.k_max; ++k) {
    auto next = derive_level(growth.chain, growth.chain.levels.back(), system);
    if (next.empty()) {
      growth.stabilized = true;
      return growth;
    }
    growth.chain.levels.push_back(std::move(next));
    growth.trdeg_trajectory.push_back(chain_trdeg(
        growth.chain.flattened(), system, options, budget, k));
    if (growth.trdeg_trajectory[k] != growth.trdeg_trajectory[k - 1]) continue;

    if (system.assumptions.no_algebraic_gap) {
      growth.stabilized = true;
      return growth;
    }
    // Without the standing hypothesis, confirm that one more level stays
    // inside the field already generated.
    auto probe = derive_level(growth.chain, growth.chain.levels.back(), system);
    bool confirmed = true;
    try {
      auto gens = growth.chain.flattened();
      for (const auto& candidate : probe) {
        if (!field_membership(candidate, gens, system.X, budget)) {
          confirmed = false;
          break;
        }
      }
      if (confirmed) {
        growth.caveats.push_back(
            "field stability of the chain confirmed by membership checks");
      }
    } catch (const budget_error& e) {
      growth.caveats.push_back(
          std::string("field stability accepted on trdeg evidence only "
                      "(membership confirmation hit the budget: ") +
          e.what() + ")");
      confirmed = true;
    }
    if (confirmed) {
      growth.stabilized = true;
      return growth;
    }
  }
  return growth;
}

}  // namespace

ObservabilityReport rationally_observable(const RationalSystem& system,
                                          const ObsOptions& options,
                                          const Budget& budget) {
  ObservabilityReport report;
  report.method = effective_method(system, options);
  Growth growth = grow_chain(system, options, budget);
  report.chain = std::move(growth.chain);
  report.trdeg_trajectory = std::move(growth.trdeg_trajectory);
  report.stabilized = growth.stabilized;
  report.caveats = std::move(growth.caveats);
  report.trdeg_obs = report.trdeg_trajectory.back();
  report.dim_X = system.X.dim(budget);
  report.rationally_observable = report.trdeg_obs == report.dim_X;

  report.caveats.push_back(
      "irreducibility of the variety is assumed, not verified");
  if (report.method == TrdegMethod::JacobianProbabilistic) {
    report.caveats.push_back(
        "jacobian transcendence degree is a probabilistic lower bound");
  }
  if (!growth.stabilized) {
    report.caveats.push_back("chain did not stabilize within k_max = " +
                             std::to_string(options.k_max));
  }
  if (!system.assumptions.no_algebraic_gap) {
    report.caveats.push_back(
        "no_algebraic_gap not asserted: transcendence-degree equality may not "
        "imply field equality");
    if (report.rationally_observable) {
      auto gens = report.chain.flattened();
      for (int i = 0; i < system.n(); ++i) {
        RationalFunction xi = RationalFunction::variable(system.n(), i);
        try {
          if (!field_membership(xi, gens, system.X, budget)) {
            report.rationally_observable = false;
            report.caveats.push_back(
                "coordinate " + system.variables[i] +
                " is not in the observation field; observability rejected by "
                "membership check");
          }
        } catch (const budget_error& e) {
          report.caveats.push_back("membership confirmation for " +
                                   system.variables[i] +
                                   " skipped: " + e.what());
        }
      }
    }
  }
  return report;
}

IndexResult observability_index(const RationalSystem& system,
                                const ObsOptions& options,
                                const Budget& budget) {
  Growth growth = grow_chain(system, options, budget);
  int trdeg = growth.trdeg_trajectory.back();
  int dim = system.X.dim(budget);
  auto trajectory_text = [&]() {
    std::string t;
    for (std::size_t i = 0; i < growth.trdeg_trajectory.size(); ++i) {
      if (i) t += ", ";
      t += std::to_string(growth.trdeg_trajectory[i]);
    }
    return t;
  };
  if (trdeg != dim) {
    throw error("observability index undefined: system is not rationally "
                "observable (trdeg trajectory: " + trajectory_text() + ")");
  }
  if (!growth.stabilized) {
    throw error("observability index not achieved within k_max = " +
                std::to_string(options.k_max) +
                " (trdeg trajectory: " + trajectory_text() + ")");
  }

  auto full = growth.chain.flattened();
  for (std::size_t k = 0; k < growth.chain.levels.size(); ++k) {
    std::vector<RationalFunction> gk;
    for (std::size_t l = 0; l <= k; ++l) {
      gk.insert(gk.end(), growth.chain.levels[l].begin(),
                growth.chain.levels[l].end());
    }
    bool generates = true;
    for (const auto& element : full) {
      if (std::find(gk.begin(), gk.end(), element) != gk.end()) continue;
      if (!field_membership(element, gk, system.X, budget)) {
        generates = false;
        break;
      }
    }
    if (generates) {
      IndexResult result;
      result.n_o = static_cast<int>(gk.size());
      result.achieved_at_level = static_cast<int>(k);
      result.chain = std::move(growth.chain);
      result.trdeg_trajectory = std::move(growth.trdeg_trajectory);
      return result;
    }
  }
  throw error("observability index not achieved within k_max = " +
              std::to_string(options.k_max) +
              " (trdeg trajectory: " + trajectory_text() + ")");
}

std::vector<std::vector<RationalFunction>> subfield_tower(
    const RationalSystem& system, std::vector<std::string>* warnings,
    const ObsOptions& options, const Budget& budget) {
  Growth growth = grow_chain(system, options, budget);
  auto gens = growth.chain.flattened();
  int n = system.n();
  int d = system.X.dim(budget);

  std::vector<std::vector<RationalFunction>> tower;
  for (int i = 1; i <= d; ++i) {
    std::vector<RationalFunction> images;
    for (int j = 0; j < n; ++j) {
      if (j < i) {
        images.push_back(RationalFunction::variable(n, j));
      } else {
        images.push_back(RationalFunction::zero(n));
      }
    }
    std::vector<RationalFunction> layer;
    for (std::size_t g = 0; g < gens.size(); ++g) {
      try {
        layer.push_back(gens[g].substituted(images));
      } catch (const error&) {
        if (warnings) {
          warnings->push_back("generator " + std::to_string(g) +
                              " dropped from subfield level " +
                              std::to_string(i) +
                              ": denominator vanishes under the substitution");
        }
      }
    }
    tower.push_back(std::move(layer));
  }
  return tower;
}

}  // namespace ratsys
