#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratsys/sysmodel.hpp"

namespace ratsys {

// Levels of iterated Lie derivatives of the output along the drift and input
// fields. Level 0 is {h}; level k+1 applies L_f0 and L_f1 to level k.
// Derivatives that canonicalize to the zero function generate nothing and are
// never stored; all other entries are globally deduplicated, so each rational
// function appears once, at the first level that produces it.
struct GeneratorChain {
  std::vector<std::vector<RationalFunction>> levels;

  std::vector<RationalFunction> flattened() const;
  std::size_t size() const;
  bool contains(const RationalFunction& r) const;
};

GeneratorChain generator_chain(const RationalSystem& system, int k_max);

enum class TrdegMethod { JacobianProbabilistic, EliminationExact };

// Probabilistic transcendence degree: max exact Jacobian rank of the
// generators over `trials` random sample points (chain rule through the
// parametrization when the variety carries one). Never overestimates.
int trdeg_jacobian(const std::vector<RationalFunction>& generators,
                   const Variety& variety, int trials, std::uint64_t seed);

// Exact transcendence degree by implicitization: eliminate the ambient
// variables from I(X) + <q_i t_i - p_i> saturated by the denominator product,
// then take the dimension of the image ideal.
int trdeg_exact(const std::vector<RationalFunction>& generators,
                const Variety& variety,
                const Budget& budget = default_budget());

// Decides f in Q(generators) inside the function field of X via the doubled
// ideal of the generic fiber (cross-multiplied differences, saturated by all
// denominators at both copies).
bool field_membership(const RationalFunction& f,
                      const std::vector<RationalFunction>& generators,
                      const Variety& variety,
                      const Budget& budget = default_budget());

struct ObsOptions {
  int k_max = 8;
  int trials = 3;
  std::uint64_t seed = 20260815;
  // Preferred trdeg algorithm; falls back to exact elimination when the
  // variety offers no way to draw sample points.
  TrdegMethod method = TrdegMethod::JacobianProbabilistic;
};

struct ObservabilityReport {
  int trdeg_obs = 0;
  int dim_X = 0;
  bool rationally_observable = false;
  std::optional<int> n_o;
  GeneratorChain chain;
  TrdegMethod method = TrdegMethod::JacobianProbabilistic;
  std::vector<int> trdeg_trajectory;  // trdeg of the chain through level k
  bool stabilized = false;
  std::vector<std::string> caveats;
};

// Grows the chain until the trdeg is unchanged over two consecutive levels
// (or k_max), compares against dim X. Under no_algebraic_gap the trdeg
// equality is accepted as field equality; otherwise coordinate memberships
// are checked as confirmation when the budget allows.
ObservabilityReport rationally_observable(
    const RationalSystem& system, const ObsOptions& options = {},
    const Budget& budget = default_budget());

struct IndexResult {
  int n_o = 0;
  int achieved_at_level = 0;
  GeneratorChain chain;
  std::vector<int> trdeg_trajectory;
};

// Def.-13 index: the count |G_k| at the smallest k whose level-k chain
// already generates the whole observation field, field equality decided by
// membership of every stabilized-chain element. Requires the system to be
// rationally observable; throws (with the trdeg trajectory in the message)
// when no k <= k_max achieves equality.
IndexResult observability_index(const RationalSystem& system,
                                const ObsOptions& options = {},
                                const Budget& budget = default_budget());

// Experimental: canonical observation subfields of an OCF system. Entry i
// (1-based, i = 1..dim X) lists the chain generators with coordinates
// x_{i+1}..x_n substituted by zero; generators whose denominators vanish
// under the substitution are dropped with a warning. Callers must ensure the
// system is in observable canonical form.
std::vector<std::vector<RationalFunction>> subfield_tower(
    const RationalSystem& system, std::vector<std::string>* warnings = nullptr,
    const ObsOptions& options = {}, const Budget& budget = default_budget());

}  // namespace ratsys
