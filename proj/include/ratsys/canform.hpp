#pragma once

#include <string>
#include <vector>

#include "ratsys/obsfield.hpp"
#include "ratsys/sysmodel.hpp"

namespace ratsys {

// Birational correspondence between two varieties. forward has one component
// per target coordinate (functions of the source variables); inverse one per
// source coordinate (functions of the target variables). The exception ideals
// are principal, generated by the product of every denominator involved (the
// unit ideal when there are none, i.e. an empty exception locus). Both
// composition identities are verified symbolically at construction, modulo
// the respective defining ideals after saturating by the exception products.
struct BirationalMap {
  Variety source;
  Variety target;
  std::vector<RationalFunction> forward;
  std::vector<RationalFunction> inverse;
  Ideal exception_source;
  Ideal exception_target;
};

BirationalMap make_birational_map(
    const Variety& source, const Variety& target,
    std::vector<RationalFunction> forward,
    std::vector<RationalFunction> inverse,
    const std::vector<Polynomial>& extra_source_factors = {},
    const std::vector<Polynomial>& extra_target_factors = {},
    const Budget& budget = default_budget());

BirationalMap identity_map(const Variety& variety);

struct OcfViolation {
  std::string code;
  int index = -1;  // equation index when applicable, -1 otherwise
  std::string detail;
};

// Observable-canonical-form check: output is the first coordinate, drift
// component i is exactly x_{i+1} for i < n, the input gain f_{n,1} does not
// vanish identically on X, every function is in canonical representation.
// is_ocf also requires algebraic controllability to be asserted. The
// nonvanishing outcome is reported separately; no controllability conclusion
// is drawn from it.
struct OcfReport {
  bool is_ocf = false;
  bool controllability_assumed = false;
  bool fn1_nonvanishing = false;
  std::vector<OcfViolation> violations;
};

OcfReport is_ocf(const RationalSystem& system,
                 const Budget& budget = default_budget());

struct CanonicalizationResult {
  RationalSystem system;
  BirationalMap map;
  int n_o = 0;
};

// Canonicalization: b1 = h, b_{i+1} = L_f0 b_i, sized by the smallest prefix
// that generates the observation field; the image variety is the Zariski
// closure of b(X) and the inverse is read off the lex Groebner basis of the
// graph ideal. Refuses (with the reason) when validation fails, the
// controllability / no-gap assumptions are not asserted, the system is not
// rationally observable, the drift chain dies or exhausts k_max, the initial
// state sits on an exception locus, or no linear-in-x_i basis element exists.
CanonicalizationResult to_ocf(const RationalSystem& system,
                              const ObsOptions& options = {},
                              const Budget& budget = default_budget());

// Change of coordinates along a birational map whose source is the system's
// variety: every system function g becomes g ∘ b^{-1} reduced to normal form
// modulo the target ideal, the drift/input fields transform through Lie
// derivatives of the forward components, and the initial state maps through
// b. Output coordinates are named x1..xm.
RationalSystem apply_map(const RationalSystem& system, const BirationalMap& map,
                         const Budget& budget = default_budget());

// Equality of systems as canonical data: equal ambient dimension, equal
// defining ideals (reduced bases), equal functions, equal initial states.
// Input value sets and assumption flags are not compared.
bool systems_structurally_equal(const RationalSystem& a,
                                const RationalSystem& b,
                                const Budget& budget = default_budget());

// systems_structurally_equal restricted to systems that pass is_ocf (throws
// otherwise).
bool ocf_identical(const RationalSystem& a, const RationalSystem& b,
                   const Budget& budget = default_budget());

}  // namespace ratsys
