#pragma once

#include <vector>

#include "ratsys/poly.hpp"

namespace ratsys {

// Rational function in canonical form: numerator and denominator coprime,
// denominator never zero, and the denominator normalized so that its constant
// term is 1 when that term is nonzero, otherwise its graded-lex leading
// coefficient is 1. The zero function is 0/1. Every constructor and operation
// re-establishes this form.
class RationalFunction {
 public:
  RationalFunction(Polynomial num, Polynomial den);

  static RationalFunction zero(int nvars);
  static RationalFunction constant(int nvars, const Rat& c);
  static RationalFunction variable(int nvars, int index);
  static RationalFunction from_polynomial(Polynomial p);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  int nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  RationalFunction operator-() const;
  RationalFunction operator+(const RationalFunction& rhs) const;
  RationalFunction operator-(const RationalFunction& rhs) const;
  RationalFunction operator*(const RationalFunction& rhs) const;
  // Throws on division by the zero function.
  RationalFunction operator/(const RationalFunction& rhs) const;
  bool operator==(const RationalFunction& rhs) const;
  bool operator!=(const RationalFunction& rhs) const { return !(*this == rhs); }

  RationalFunction scaled(const Rat& c) const;
  RationalFunction pow(int exponent) const;  // exponent >= 0

  // Partial derivative (quotient rule, re-canonicalized).
  RationalFunction derivative(int var) const;

  // Throws if the denominator vanishes at the point.
  Rat evaluate(const std::vector<Rat>& point) const;
  bool denominator_vanishes_at(const std::vector<Rat>& point) const;

  // Composition with images (one per variable of *this). Numerator and
  // denominator are composed through field arithmetic separately, so a zero
  // value of the composed numerator never masquerades as a domain error;
  // throws only if the composed denominator is identically zero.
  RationalFunction substituted(const std::vector<RationalFunction>& images) const;

  // Ring-extension helper matching Polynomial::extended.
  RationalFunction extended(int new_nvars) const;

 private:
  RationalFunction() : num_(0), den_(0) {}

  // Skips the gcd; callers guarantee num and den are already coprime. Only
  // the zero-numerator and unit normalizations are applied.
  static RationalFunction reduced(Polynomial num, Polynomial den);
  RationalFunction combined(const RationalFunction& rhs, const Rat& sign) const;

  Polynomial num_;
  Polynomial den_;
};

using VectorField = std::vector<RationalFunction>;

// L_F(r) = sum_i F_i * dr/dx_i.
RationalFunction lie_derivative(const RationalFunction& r,
                                const VectorField& field);

}  // namespace ratsys
