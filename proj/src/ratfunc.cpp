#include "ratsys/ratfunc.hpp"

namespace ratsys {

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (num_.nvars() != den_.nvars()) {
    throw error("rational function arity mismatch");
  }
  if (den_.is_zero()) throw error("zero denominator");
  if (!num_.is_zero()) {
    Polynomial g = poly_gcd(num_, den_);
    if (!g.is_one()) {
      num_ = *divide_exact(num_, g);
      den_ = *divide_exact(den_, g);
    }
  }
  *this = reduced(std::move(num_), std::move(den_));
}

RationalFunction RationalFunction::reduced(Polynomial num, Polynomial den) {
  RationalFunction out;
  out.num_ = std::move(num);
  out.den_ = std::move(den);
  if (out.num_.is_zero()) {
    out.den_ = Polynomial::constant(out.num_.nvars(), Rat(1));
    return out;
  }
  Rat c0 = out.den_.constant_term();
  Rat scale = c0 != 0
                  ? c0
                  : out.den_.leading_coefficient(MonomialOrder::graded_lex());
  if (scale != 1) {
    Rat inv = Rat(1) / scale;
    out.num_ = out.num_.scaled(inv);
    out.den_ = out.den_.scaled(inv);
  }
  return out;
}

RationalFunction RationalFunction::zero(int nvars) {
  return from_polynomial(Polynomial::zero(nvars));
}

RationalFunction RationalFunction::constant(int nvars, const Rat& c) {
  return from_polynomial(Polynomial::constant(nvars, c));
}

RationalFunction RationalFunction::variable(int nvars, int index) {
  return from_polynomial(Polynomial::variable(nvars, index));
}

RationalFunction RationalFunction::from_polynomial(Polynomial p) {
  int n = p.nvars();
  return reduced(std::move(p), Polynomial::constant(n, Rat(1)));
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction out = *this;
  out.num_ = -out.num_;
  return out;
}

// a/b + sign*c/d with b = g*b2, d = g*d2, g = gcd(b, d): the sum is
// t / (g*b2*d2) with t = a*d2 + sign*c*b2, and t is coprime to b2 and d2, so
// only gcd(t, g) remains to cancel. The gcds here stay near the size of the
// denominators' common part instead of their product.
RationalFunction RationalFunction::combined(const RationalFunction& rhs,
                                            const Rat& sign) const {
  if (is_polynomial() && rhs.is_polynomial()) {
    return reduced(num_ + rhs.num_.scaled(sign), den_);
  }
  Polynomial g = poly_gcd(den_, rhs.den_);
  if (g.is_one()) {
    return reduced(num_ * rhs.den_ + rhs.num_.scaled(sign) * den_,
                   den_ * rhs.den_);
  }
  Polynomial b2 = *divide_exact(den_, g);
  Polynomial d2 = *divide_exact(rhs.den_, g);
  Polynomial t = num_ * d2 + rhs.num_.scaled(sign) * b2;
  Polynomial h = poly_gcd(t, g);
  if (h.is_one()) return reduced(std::move(t), den_ * d2);
  return reduced(*divide_exact(t, h), *divide_exact(den_, h) * d2);
}

RationalFunction RationalFunction::operator+(const RationalFunction& rhs) const {
  return combined(rhs, Rat(1));
}

RationalFunction RationalFunction::operator-(const RationalFunction& rhs) const {
  return combined(rhs, Rat(-1));
}

RationalFunction RationalFunction::operator*(const RationalFunction& rhs) const {
  Polynomial g1 = poly_gcd(num_, rhs.den_);
  Polynomial g2 = poly_gcd(rhs.num_, den_);
  return reduced(*divide_exact(num_, g1) * *divide_exact(rhs.num_, g2),
                 *divide_exact(den_, g2) * *divide_exact(rhs.den_, g1));
}

RationalFunction RationalFunction::operator/(const RationalFunction& rhs) const {
  if (rhs.is_zero()) throw error("division by zero rational function");
  Polynomial g1 = poly_gcd(num_, rhs.num_);
  Polynomial g2 = poly_gcd(den_, rhs.den_);
  return reduced(*divide_exact(num_, g1) * *divide_exact(rhs.den_, g2),
                 *divide_exact(den_, g2) * *divide_exact(rhs.num_, g1));
}

bool RationalFunction::operator==(const RationalFunction& rhs) const {
  return num_ == rhs.num_ && den_ == rhs.den_;
}

RationalFunction RationalFunction::scaled(const Rat& c) const {
  return reduced(num_.scaled(c), den_);
}

RationalFunction RationalFunction::pow(int exponent) const {
  if (exponent < 0) throw error("negative rational function exponent");
  return reduced(num_.pow(exponent), den_.pow(exponent));
}

RationalFunction RationalFunction::derivative(int var) const {
  Polynomial dn = num_.differentiate(var);
  if (den_.is_one()) return reduced(std::move(dn), den_);
  Polynomial dd = den_.differentiate(var);
  if (dd.is_zero()) return RationalFunction(std::move(dn), den_);
  // Repeated factors of the denominator all land in gcd(q, q'); splitting
  // them off first keeps the final reduction of (p'q - pq')/q^2 small.
  Polynomial w = poly_gcd(den_, dd);
  if (w.is_one()) {
    return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
  }
  Polynomial qhat = *divide_exact(den_, w);
  return RationalFunction(dn * qhat - num_ * *divide_exact(dd, w),
                          den_ * qhat);
}

Rat RationalFunction::evaluate(const std::vector<Rat>& point) const {
  Rat d = den_.evaluate(point);
  if (d == 0) throw error("denominator vanishes at evaluation point");
  return num_.evaluate(point) / d;
}

bool RationalFunction::denominator_vanishes_at(
    const std::vector<Rat>& point) const {
  return den_.evaluate(point) == 0;
}

namespace {

// Composes a polynomial with rational images through field arithmetic,
// caching image powers per variable.
RationalFunction compose_polynomial(const Polynomial& p,
                                    const std::vector<RationalFunction>& images,
                                    int out_nvars) {
  std::vector<std::vector<RationalFunction>> powers(images.size());
  auto power_of = [&](int var, int e) -> const RationalFunction& {
    auto& cache = powers[var];
    if (cache.empty()) cache.push_back(RationalFunction::constant(out_nvars, Rat(1)));
    while (static_cast<int>(cache.size()) <= e) {
      cache.push_back(cache.back() * images[var]);
    }
    return cache[e];
  };
  RationalFunction sum = RationalFunction::zero(out_nvars);
  for (const auto& [e, c] : p.terms()) {
    RationalFunction term = RationalFunction::constant(out_nvars, c);
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (e[i] != 0) term = term * power_of(static_cast<int>(i), e[i]);
    }
    sum = sum + term;
  }
  return sum;
}

}  // namespace

RationalFunction RationalFunction::substituted(
    const std::vector<RationalFunction>& images) const {
  if (static_cast<int>(images.size()) != nvars()) {
    throw error("substitution image count mismatch");
  }
  int out_nvars = images.empty() ? 0 : images[0].nvars();
  for (const auto& im : images) {
    if (im.nvars() != out_nvars) throw error("substitution image arity mismatch");
  }
  RationalFunction top = compose_polynomial(num_, images, out_nvars);
  RationalFunction bottom = compose_polynomial(den_, images, out_nvars);
  if (bottom.is_zero()) {
    throw error("substitution maps denominator to zero identically");
  }
  return top / bottom;
}

RationalFunction RationalFunction::extended(int new_nvars) const {
  return RationalFunction(num_.extended(new_nvars), den_.extended(new_nvars));
}

RationalFunction lie_derivative(const RationalFunction& r,
                                const VectorField& field) {
  if (static_cast<int>(field.size()) != r.nvars()) {
    throw error("vector field arity mismatch");
  }
  RationalFunction sum = RationalFunction::zero(r.nvars());
  for (int i = 0; i < r.nvars(); ++i) {
    if (field[i].is_zero()) continue;
    sum = sum + field[i] * r.derivative(i);
  }
  return sum;
}

}  // namespace ratsys
