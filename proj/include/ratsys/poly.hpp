#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ratsys/errors.hpp"
#include "ratsys/numeric.hpp"

namespace ratsys {

// Exponent vector of a monomial; length always equals the ambient variable
// count. Exponents are machine integers; arithmetic that would push one past
// kMaxExponent is a hard error rather than silent wraparound.
using Exps = std::vector<int>;

inline constexpr int kMaxExponent = 1 << 20;

int exps_total_degree(const Exps& e);
bool exps_divides(const Exps& divisor, const Exps& dividend);
Exps exps_mul(const Exps& a, const Exps& b);      // componentwise add, checked
Exps exps_div(const Exps& a, const Exps& b);      // requires divisibility
Exps exps_lcm(const Exps& a, const Exps& b);
bool exps_coprime(const Exps& a, const Exps& b);

// Term order. GradedLex: total degree first, ties lexicographic with the
// first declared variable most significant. Lex: straight lexicographic.
// Block: the first `block` variables compare graded-lex first (an elimination
// order for them), ties fall through to graded-lex on the rest.
struct MonomialOrder {
  enum class Kind { GradedLex, Lex, Block };

  Kind kind = Kind::GradedLex;
  int block = 0;

  static MonomialOrder graded_lex() { return {Kind::GradedLex, 0}; }
  static MonomialOrder lex() { return {Kind::Lex, 0}; }
  static MonomialOrder block_elim(int first_block) {
    return {Kind::Block, first_block};
  }

  bool less(const Exps& a, const Exps& b) const;
  bool greater(const Exps& a, const Exps& b) const { return less(b, a); }

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) {
    return a.kind == b.kind && a.block == b.block;
  }
  friend bool operator<(const MonomialOrder& a, const MonomialOrder& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.block < b.block;
  }
};

// Sparse multivariate polynomial over Q. Invariants: every stored key has
// length nvars(), no stored coefficient is zero.
class Polynomial {
 public:
  using TermMap = std::map<Exps, Rat>;

  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial zero(int nvars) { return Polynomial(nvars); }
  static Polynomial constant(int nvars, const Rat& c);
  static Polynomial variable(int nvars, int index);
  static Polynomial monomial(int nvars, const Exps& exps, const Rat& c);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  bool is_one() const;
  // Coefficient of the all-zeros monomial (0 if absent).
  Rat constant_term() const;
  // Max total degree over terms; -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(int var) const;
  bool involves(int var) const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  bool operator==(const Polynomial& rhs) const;
  bool operator!=(const Polynomial& rhs) const { return !(*this == rhs); }

  Polynomial scaled(const Rat& c) const;
  Polynomial pow(int exponent) const;
  Polynomial differentiate(int var) const;
  Rat evaluate(const std::vector<Rat>& point) const;

  // Leading data with respect to an order; throws on the zero polynomial.
  std::pair<Exps, Rat> leading_term(const MonomialOrder& order) const;
  const Exps& leading_monomial(const MonomialOrder& order) const;
  Rat leading_coefficient(const MonomialOrder& order) const;
  Polynomial monic(const MonomialOrder& order) const;

  // Adds c * x^exps, erasing the term if the sum cancels.
  void add_term(const Exps& exps, const Rat& c);

  // Ring-extension / reindexing helpers. extended appends fresh trailing
  // variables; permuted applies new_index = where[old_index]; restricted
  // keeps only the listed variables (every term's support must lie in them)
  // and renumbers to 0..keep.size()-1 in list order.
  Polynomial extended(int new_nvars) const;
  Polynomial permuted(const std::vector<int>& where) const;
  Polynomial restricted(const std::vector<int>& keep) const;

  // Terms sorted descending by `order` (leading term first).
  std::vector<std::pair<Exps, Rat>> sorted_terms(
      const MonomialOrder& order) const;

 private:
  int nvars_;
  TermMap terms_;
};

// Monic (graded-lex) greatest common divisor via content splitting and the
// subresultant PRS on a shared variable, with cheap divisibility and
// line-image coprimality exits. gcd(p, 0) is the monic normalization of p.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

// Quotient p / d when d divides p exactly, nullopt otherwise.
std::optional<Polynomial> divide_exact(const Polynomial& p,
                                       const Polynomial& d);

}  // namespace ratsys
