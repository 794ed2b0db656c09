#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "ratsys/poly.hpp"

namespace ratsys {

// Resource cap for basis computations: total S-pairs processed and the
// maximum total degree any intermediate polynomial may reach. Exceeding
// either raises budget_error; results are never silently truncated.
struct Budget {
  long max_pairs = 50000;
  int max_degree = 60;
};

Budget default_budget();
void set_default_budget(const Budget& budget);

// Reduced Groebner basis: monic, interreduced, elements sorted ascending by
// leading monomial. Unique for a given ideal and order.
struct GroebnerBasis {
  MonomialOrder order;
  std::vector<Polynomial> elements;

  bool is_trivial_unit() const;  // basis == {1}
};

// Finitely generated ideal of Q[x1..xn]. Zero generators are dropped at
// construction. Computed bases are cached per order; the cache is shared
// across copies and safe to fill from several threads (idempotent results,
// first writer wins).
class Ideal {
 public:
  Ideal(int nvars, std::vector<Polynomial> generators);
  explicit Ideal(int nvars) : Ideal(nvars, {}) {}

  int nvars() const { return nvars_; }
  const std::vector<Polynomial>& generators() const { return generators_; }

  const GroebnerBasis& basis(const MonomialOrder& order,
                             const Budget& budget) const;
  const GroebnerBasis& basis(const MonomialOrder& order) const {
    return basis(order, default_budget());
  }

 private:
  int nvars_;
  std::vector<Polynomial> generators_;
  struct Cache {
    std::mutex mutex;
    std::map<MonomialOrder, std::shared_ptr<const GroebnerBasis>> entries;
  };
  std::shared_ptr<Cache> cache_;
};

// Remainder of the division of p by the basis elements; the unique normal
// form when the basis is reduced.
Polynomial normal_form(const Polynomial& p, const GroebnerBasis& basis);

// Buchberger with the sugar selection strategy and both classical pair
// criteria, followed by minimalization and interreduction.
GroebnerBasis buchberger(const std::vector<Polynomial>& generators, int nvars,
                         const MonomialOrder& order, const Budget& budget);

// p in I, via normal form against a cached graded-lex basis.
bool ideal_contains(const Ideal& ideal, const Polynomial& p,
                    const Budget& budget = default_budget());

// Equality as ideals (reduced graded-lex bases compared).
bool ideal_equal(const Ideal& a, const Ideal& b,
                 const Budget& budget = default_budget());

// Elimination ideal: generators of I ∩ Q[keep]. keep lists variable indices
// (ascending); the result lives in the same ambient ring but its generators
// only involve the kept variables.
Ideal eliminate(const Ideal& ideal, const std::vector<int>& keep,
                const Budget& budget = default_budget());

// Saturation I : q^inf via a fresh Rabinowitsch variable.
Ideal saturate(const Ideal& ideal, const Polynomial& q,
               const Budget& budget = default_budget());

// Radical membership: p vanishes on V(I) iff 1 in I + <1 - y p>.
bool vanishes_on_variety(const Polynomial& p, const Ideal& ideal,
                         const Budget& budget = default_budget());

// Krull dimension of V(I), computed combinatorially from the leading-term
// ideal (largest variable subset independent modulo the leading terms).
// Throws on the unit ideal.
int ideal_dimension(const Ideal& ideal, const Budget& budget = default_budget());

// Reindexing helper: generators restricted to the listed variables, in a
// fresh |keep|-variable ring. Every generator must only involve them.
Ideal restrict_ideal(const Ideal& ideal, const std::vector<int>& keep);

}  // namespace ratsys
