#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ratsys/groebner.hpp"
#include "ratsys/ratfunc.hpp"

namespace ratsys {

// Rational map from a d-dimensional parameter space onto (a dense subset of)
// the variety; images live in the ambient variable count.
struct Parametrization {
  std::vector<std::string> parameter_names;
  std::vector<RationalFunction> images;  // one per ambient variable

  int parameter_count() const { return static_cast<int>(parameter_names.size()); }
};

// Real affine variety X = V(I) given by a finite generating set. The ideal is
// taken as the input's word: irreducibility is assumed, not verified, and
// reports downstream carry that caveat.
class Variety {
 public:
  Variety(int nvars, std::vector<Polynomial> defining,
          std::optional<Parametrization> parametrization = std::nullopt);

  int nvars() const { return defining_.nvars(); }
  const Ideal& ideal() const { return defining_; }
  const std::optional<Parametrization>& parametrization() const {
    return parametrization_;
  }
  bool is_full_space() const { return defining_.generators().empty(); }

  // Krull dimension via the defining ideal (basis cached inside the ideal).
  int dim(const Budget& budget = default_budget()) const;

  // True when every defining polynomial is a scalar multiple of a power of a
  // single variable; fills `zeroed` with those variable indices.
  bool is_coordinate_subspace(std::vector<int>* zeroed = nullptr) const;

  bool contains(const std::vector<Rat>& point) const;

 private:
  Ideal defining_;
  std::optional<Parametrization> parametrization_;
};

struct Assumptions {
  bool algebraically_controllable = false;
  bool no_algebraic_gap = false;
};

// SISO system affine in the input: dx/dt = f0(x) + u f1(x), y = h(x), x(0) =
// x0, with every function a canonical rational function on X.
struct RationalSystem {
  Variety X;
  std::vector<std::string> variables;
  VectorField f0;
  VectorField f1;
  RationalFunction h;
  std::vector<Rat> x0;
  std::vector<Rat> input_values;
  Assumptions assumptions;

  int n() const { return X.nvars(); }
  bool input_free() const;
  // All denominators appearing in f0, f1 and h (non-constant ones only).
  std::vector<Polynomial> denominators() const;
};

struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> caveats;
  bool ok() const { return violations.empty(); }
};

// Checks the system well-formedness contract: proper defining ideal, x0 on X,
// no denominator identically zero on X or vanishing at x0, input value set
// containing 0 and at least two distinct values, arity agreement.
ValidationReport validate_system(const RationalSystem& system,
                                 const Budget& budget = default_budget());

struct SamplePoint {
  std::vector<Rat> coordinates;
  bool on_variety = false;
};

// Deterministic rational sample: full space and coordinate subspaces draw
// coordinates with |numerator|, denominator <= bound; parametrized varieties
// sample the parameter space and push through the map. Throws for varieties
// outside those classes.
SamplePoint sample_point(const Variety& variety, std::uint64_t seed,
                         long bound = 50);

// f0 + alpha f1 for each declared input value alpha.
std::vector<VectorField> alpha_fields(const RationalSystem& system);

}  // namespace ratsys
