#include "ratsys/poly.hpp"

#include <algorithm>

namespace ratsys {

namespace {

void check_same_arity(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) {
    throw error("polynomial arity mismatch: " + std::to_string(a.nvars()) +
                " vs " + std::to_string(b.nvars()));
  }
}

// Lexicographic scan with the first declared variable most significant.
int lex_cmp(const Exps& a, const Exps& b, std::size_t from, std::size_t to) {
  for (std::size_t i = from; i < to; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

int range_degree(const Exps& e, std::size_t from, std::size_t to) {
  int d = 0;
  for (std::size_t i = from; i < to; ++i) d += e[i];
  return d;
}

// graded-lex on the index range [from, to): total degree, then lex.
int graded_lex_cmp(const Exps& a, const Exps& b, std::size_t from,
                   std::size_t to) {
  int da = range_degree(a, from, to);
  int db = range_degree(b, from, to);
  if (da != db) return da < db ? -1 : 1;
  return lex_cmp(a, b, from, to);
}

}  // namespace

int exps_total_degree(const Exps& e) {
  return range_degree(e, 0, e.size());
}

bool exps_divides(const Exps& divisor, const Exps& dividend) {
  for (std::size_t i = 0; i < divisor.size(); ++i) {
    if (divisor[i] > dividend[i]) return false;
  }
  return true;
}

Exps exps_mul(const Exps& a, const Exps& b) {
  Exps out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] + b[i];
    if (out[i] > kMaxExponent) throw error("exponent overflow");
  }
  return out;
}

Exps exps_div(const Exps& a, const Exps& b) {
  Exps out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = a[i] - b[i];
    if (out[i] < 0) throw error("monomial division underflow");
  }
  return out;
}

Exps exps_lcm(const Exps& a, const Exps& b) {
  Exps out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

bool exps_coprime(const Exps& a, const Exps& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 0 && b[i] > 0) return false;
  }
  return true;
}

bool MonomialOrder::less(const Exps& a, const Exps& b) const {
  switch (kind) {
    case Kind::GradedLex:
      return graded_lex_cmp(a, b, 0, a.size()) < 0;
    case Kind::Lex:
      return lex_cmp(a, b, 0, a.size()) < 0;
    case Kind::Block: {
      std::size_t k = static_cast<std::size_t>(block);
      int head = graded_lex_cmp(a, b, 0, k);
      if (head != 0) return head < 0;
      return graded_lex_cmp(a, b, k, a.size()) < 0;
    }
  }
  return false;
}

Polynomial Polynomial::constant(int nvars, const Rat& c) {
  Polynomial p(nvars);
  if (c != 0) p.terms_.emplace(Exps(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars) throw error("variable index out of range");
  Exps e(nvars, 0);
  e[index] = 1;
  Polynomial p(nvars);
  p.terms_.emplace(std::move(e), Rat(1));
  return p;
}

Polynomial Polynomial::monomial(int nvars, const Exps& exps, const Rat& c) {
  if (static_cast<int>(exps.size()) != nvars) {
    throw error("monomial arity mismatch");
  }
  Polynomial p(nvars);
  if (c != 0) p.terms_.emplace(exps, c);
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && exps_total_degree(terms_.begin()->first) == 0;
}

bool Polynomial::is_one() const {
  return is_constant() && constant_term() == 1;
}

Rat Polynomial::constant_term() const {
  auto it = terms_.find(Exps(nvars_, 0));
  return it == terms_.end() ? Rat(0) : it->second;
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, exps_total_degree(e));
  return d;
}

int Polynomial::degree_in(int var) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

bool Polynomial::involves(int var) const {
  for (const auto& [e, c] : terms_) {
    if (e[var] > 0) return true;
  }
  return false;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  check_same_arity(*this, rhs);
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  check_same_arity(*this, rhs);
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  Polynomial out = *this;
  out += rhs;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  Polynomial out = *this;
  out -= rhs;
  return out;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  check_same_arity(*this, rhs);
  Polynomial out(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      out.add_term(exps_mul(ea, eb), ca * cb);
    }
  }
  return out;
}

bool Polynomial::operator==(const Polynomial& rhs) const {
  return nvars_ == rhs.nvars_ && terms_ == rhs.terms_;
}

Polynomial Polynomial::scaled(const Rat& c) const {
  Polynomial out(nvars_);
  if (c == 0) return out;
  for (const auto& [e, coef] : terms_) out.terms_.emplace(e, coef * c);
  return out;
}

Polynomial Polynomial::pow(int exponent) const {
  if (exponent < 0) throw error("negative polynomial exponent");
  Polynomial result = Polynomial::constant(nvars_, Rat(1));
  Polynomial base = *this;
  int e = exponent;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

Polynomial Polynomial::differentiate(int var) const {
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exps d = e;
    d[var] -= 1;
    out.add_term(d, c * e[var]);
  }
  return out;
}

Rat Polynomial::evaluate(const std::vector<Rat>& point) const {
  if (static_cast<int>(point.size()) != nvars_) {
    throw error("evaluation point arity mismatch");
  }
  Rat sum(0);
  for (const auto& [e, c] : terms_) {
    Rat term = c;
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] != 0) term *= rat_pow(point[i], static_cast<unsigned long>(e[i]));
    }
    sum += term;
  }
  return sum;
}

std::pair<Exps, Rat> Polynomial::leading_term(const MonomialOrder& order) const {
  const Exps& m = leading_monomial(order);
  return {m, terms_.at(m)};
}

const Exps& Polynomial::leading_monomial(const MonomialOrder& order) const {
  if (terms_.empty()) throw error("leading term of zero polynomial");
  const Exps* best = &terms_.begin()->first;
  for (const auto& [e, c] : terms_) {
    if (order.less(*best, e)) best = &e;
  }
  return *best;
}

Rat Polynomial::leading_coefficient(const MonomialOrder& order) const {
  return terms_.at(leading_monomial(order));
}

Polynomial Polynomial::monic(const MonomialOrder& order) const {
  if (is_zero()) return *this;
  Rat lc = leading_coefficient(order);
  return scaled(Rat(1) / lc);
}

void Polynomial::add_term(const Exps& exps, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::extended(int new_nvars) const {
  if (new_nvars < nvars_) throw error("extended() cannot shrink arity");
  Polynomial out(new_nvars);
  for (const auto& [e, c] : terms_) {
    Exps ne = e;
    ne.resize(new_nvars, 0);
    out.terms_.emplace(std::move(ne), c);
  }
  return out;
}

Polynomial Polynomial::permuted(const std::vector<int>& where) const {
  if (static_cast<int>(where.size()) != nvars_) {
    throw error("permutation arity mismatch");
  }
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    Exps ne(nvars_, 0);
    for (int i = 0; i < nvars_; ++i) ne[where[i]] = e[i];
    out.terms_.emplace(std::move(ne), c);
  }
  return out;
}

Polynomial Polynomial::restricted(const std::vector<int>& keep) const {
  std::vector<int> slot(nvars_, -1);
  for (std::size_t j = 0; j < keep.size(); ++j) slot[keep[j]] = static_cast<int>(j);
  Polynomial out(static_cast<int>(keep.size()));
  for (const auto& [e, c] : terms_) {
    Exps ne(keep.size(), 0);
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (slot[i] < 0) throw error("restricted(): term involves a dropped variable");
      ne[slot[i]] = e[i];
    }
    out.terms_.emplace(std::move(ne), c);
  }
  return out;
}

std::vector<std::pair<Exps, Rat>> Polynomial::sorted_terms(
    const MonomialOrder& order) const {
  std::vector<std::pair<Exps, Rat>> out(terms_.begin(), terms_.end());
  std::sort(out.begin(), out.end(),
            [&order](const auto& a, const auto& b) {
              return order.less(b.first, a.first);
            });
  return out;
}

std::optional<Polynomial> divide_exact(const Polynomial& p,
                                       const Polynomial& d) {
  check_same_arity(p, d);
  if (d.is_zero()) throw error("division by zero polynomial");
  MonomialOrder order = MonomialOrder::graded_lex();
  auto [dm, dc] = d.leading_term(order);
  Polynomial quotient(p.nvars());
  Polynomial rest = p;
  while (!rest.is_zero()) {
    auto [rm, rc] = rest.leading_term(order);
    if (!exps_divides(dm, rm)) return std::nullopt;
    Polynomial t = Polynomial::monomial(p.nvars(), exps_div(rm, dm), rc / dc);
    quotient += t;
    rest -= t * d;
  }
  return quotient;
}

namespace {

// p viewed as univariate in `var`: map from var-degree to the coefficient
// polynomial (var exponent zeroed out).
std::map<int, Polynomial> coefficients_in(const Polynomial& p, int var) {
  std::map<int, Polynomial> coeffs;
  for (const auto& [e, c] : p.terms()) {
    Exps stripped = e;
    int d = stripped[var];
    stripped[var] = 0;
    auto [it, inserted] =
        coeffs.emplace(d, Polynomial::zero(p.nvars()));
    it->second.add_term(stripped, c);
  }
  return coeffs;
}

// Coefficient of the highest power of `var`.
Polynomial leading_coeff_in(const Polynomial& p, int var) {
  int d = p.degree_in(var);
  Polynomial out(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] != d) continue;
    Exps stripped = e;
    stripped[var] = 0;
    out.add_term(stripped, c);
  }
  return out;
}

Polynomial times_var_power(const Polynomial& p, int var, int power) {
  Polynomial out(p.nvars());
  for (const auto& [e, c] : p.terms()) {
    Exps ne = e;
    ne[var] += power;
    if (ne[var] > kMaxExponent) throw error("exponent overflow");
    out.add_term(ne, c);
  }
  return out;
}

Polynomial gcd_rec(const Polynomial& a, const Polynomial& b);

// Monic gcd of the var-coefficients of p.
Polynomial content_in(const Polynomial& p, int var) {
  Polynomial content = Polynomial::zero(p.nvars());
  for (const auto& [deg, coeff] : coefficients_in(p, var)) {
    content = gcd_rec(content, coeff);
    if (content.is_one()) break;
  }
  return content;
}

Polynomial primitive_part_in(const Polynomial& p, int var,
                             const Polynomial& content) {
  if (content.is_one()) return p;
  auto q = divide_exact(p, content);
  if (!q) throw error("internal: content does not divide its polynomial");
  return *q;
}

// lc_var(b)^(deg a - deg b + 1) * a reduced modulo b in `var`. A reduction
// step can cancel more than one degree; the deficit is multiplied back in so
// the result is exactly the classical pseudo-remainder, which the
// subresultant divisions below rely on. Returns a unchanged if its degree in
// var is already lower than b's.
Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, int var) {
  int db = b.degree_in(var);
  int da = a.degree_in(var);
  if (da < db) return a;
  Polynomial lcb = leading_coeff_in(b, var);
  int needed = da - db + 1;
  int used = 0;
  while (!a.is_zero()) {
    int d = a.degree_in(var);
    if (d < db) break;
    Polynomial lca = leading_coeff_in(a, var);
    a = a * lcb - times_var_power(lca, var, d - db) * b;
    ++used;
  }
  if (a.is_zero()) return a;
  for (; used < needed; ++used) a = a * lcb;
  return a;
}

// Componentwise minimum exponent over all terms of a nonzero polynomial.
Exps monomial_content(const Polynomial& p) {
  Exps out;
  for (const auto& [e, c] : p.terms()) {
    if (out.empty()) {
      out = e;
      continue;
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(out[i], e[i]);
  }
  return out;
}

Polynomial strip_monomial(const Polynomial& p, const Exps& m) {
  Polynomial out(p.nvars());
  for (const auto& [e, c] : p.terms()) out.add_term(exps_div(e, m), c);
  return out;
}

// p along the line x_i = alpha_i t + beta_i, as a univariate polynomial in t.
Polynomial line_image(const Polynomial& p, const std::vector<long>& alphas,
                      const std::vector<long>& betas) {
  std::vector<std::vector<Polynomial>> powers(p.nvars());
  auto power_of = [&](int i, int e) -> const Polynomial& {
    auto& cache = powers[i];
    if (cache.empty()) {
      cache.push_back(Polynomial::constant(1, Rat(1)));
      Polynomial line = Polynomial::variable(1, 0).scaled(Rat(alphas[i]));
      line += Polynomial::constant(1, Rat(betas[i]));
      cache.push_back(std::move(line));
    }
    while (static_cast<int>(cache.size()) <= e) {
      cache.push_back(cache.back() * cache[1]);
    }
    return cache[e];
  };
  Polynomial out(1);
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(1, c);
    for (int i = 0; i < p.nvars(); ++i) {
      if (e[i] != 0) term = term * power_of(i, e[i]);
    }
    out += term;
  }
  return out;
}

// Whether gcd(u, v) of univariate u, v is constant, by monic euclidean
// remainders (coefficient growth stays mild at the degrees seen here).
bool univariate_coprime(Polynomial u, Polynomial v) {
  MonomialOrder glex = MonomialOrder::graded_lex();
  while (!v.is_zero()) {
    if (v.is_constant()) return true;
    Polynomial m = v.monic(glex);
    int dv = m.degree_in(0);
    while (!u.is_zero()) {
      int du = u.degree_in(0);
      if (du < dv) break;
      u -= times_var_power(m, 0, du - dv).scaled(u.leading_coefficient(glex));
    }
    v = std::move(u);
    u = std::move(m);
  }
  return u.is_constant();
}

// Certifies coprimality from univariate images along fixed lines. If the
// image of either operand keeps its total degree, the leading form of any
// common factor survives the substitution, so a constant image gcd forces a
// constant gcd. A failed certificate proves nothing.
bool images_coprime(const Polynomial& a, const Polynomial& b) {
  static const long kAlpha[2][6] = {{1, 2, 3, 1, 2, 5}, {3, 1, 2, 5, 1, 2}};
  static const long kBeta[2][6] = {{1, -1, 2, 0, -2, 1}, {0, 2, -1, 1, 3, -1}};
  int n = a.nvars();
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<long> alphas(n), betas(n);
    for (int i = 0; i < n; ++i) {
      alphas[i] = kAlpha[attempt][i % 6];
      betas[i] = kBeta[attempt][i % 6];
    }
    Polynomial ia = line_image(a, alphas, betas);
    Polynomial ib = line_image(b, alphas, betas);
    if (ia.total_degree() != a.total_degree() &&
        ib.total_degree() != b.total_degree()) {
      continue;
    }
    if (univariate_coprime(std::move(ia), std::move(ib))) return true;
  }
  return false;
}

// Both arguments nonzero.
Polynomial gcd_rec(const Polynomial& a, const Polynomial& b) {
  MonomialOrder glex = MonomialOrder::graded_lex();
  if (a.is_zero()) return b.monic(glex);
  if (b.is_zero()) return a.monic(glex);
  if (a.is_constant() || b.is_constant()) {
    return Polynomial::constant(a.nvars(), Rat(1));
  }
  if (a == b) return a.monic(glex);

  Exps ma = monomial_content(a);
  Exps mb = monomial_content(b);
  if (exps_total_degree(ma) > 0 || exps_total_degree(mb) > 0) {
    Exps shared(ma.size());
    for (std::size_t i = 0; i < ma.size(); ++i) {
      shared[i] = std::min(ma[i], mb[i]);
    }
    Polynomial inner = gcd_rec(strip_monomial(a, ma), strip_monomial(b, mb));
    return (inner * Polynomial::monomial(a.nvars(), shared, Rat(1)))
        .monic(glex);
  }

  // A dividing operand is the gcd; the arithmetic layer hits this pattern
  // constantly when splitting off known factors.
  {
    const Polynomial* lo = &a;
    const Polynomial* hi = &b;
    if (lo->total_degree() > hi->total_degree()) std::swap(lo, hi);
    if (exps_divides(lo->leading_monomial(glex), hi->leading_monomial(glex)) &&
        divide_exact(*hi, *lo)) {
      return lo->monic(glex);
    }
  }

  if (a.nvars() >= 2 && a.total_degree() >= 4 && b.total_degree() >= 4 &&
      images_coprime(a, b)) {
    return Polynomial::constant(a.nvars(), Rat(1));
  }

  // Recurse on a variable both operands involve, preferring the one with the
  // smallest degree to keep the remainder chain short.
  int var = -1;
  int best = kMaxExponent;
  for (int i = a.nvars() - 1; i >= 0; --i) {
    if (!a.involves(i) || !b.involves(i)) continue;
    int w = std::min(a.degree_in(i), b.degree_in(i));
    if (w < best) {
      best = w;
      var = i;
    }
  }
  if (var < 0) {
    for (int i = a.nvars() - 1; i >= 0; --i) {
      if (a.involves(i)) return gcd_rec(content_in(a, i), b);
      if (b.involves(i)) return gcd_rec(a, content_in(b, i));
    }
    throw error("internal: gcd variable selection failed");
  }

  Polynomial ca = content_in(a, var);
  Polynomial cb = content_in(b, var);
  Polynomial pa = primitive_part_in(a, var, ca);
  Polynomial pb = primitive_part_in(b, var, cb);
  Polynomial cg = gcd_rec(ca, cb);

  if (pa.degree_in(var) < pb.degree_in(var)) std::swap(pa, pb);

  // Subresultant PRS: every pseudo-remainder is divided by the predicted
  // factor g*h^delta, so the chain needs no content computation of its own.
  Polynomial g = Polynomial::constant(a.nvars(), Rat(1));
  Polynomial h = g;
  Polynomial tail(a.nvars());
  while (true) {
    int delta = pa.degree_in(var) - pb.degree_in(var);
    Polynomial r = pseudo_remainder(pa, pb, var);
    if (r.is_zero()) {
      tail = std::move(pb);
      break;
    }
    if (r.degree_in(var) == 0) {
      tail = Polynomial::constant(a.nvars(), Rat(1));
      break;
    }
    pa = std::move(pb);
    auto next = divide_exact(r, g * h.pow(delta));
    if (!next) throw error("internal: subresultant chain division failed");
    pb = std::move(*next);
    g = leading_coeff_in(pa, var);
    if (delta == 1) {
      h = g;
    } else if (delta > 1) {
      auto hn = divide_exact(g.pow(delta), h.pow(delta - 1));
      if (!hn) throw error("internal: subresultant chain division failed");
      h = std::move(*hn);
    }
  }
  if (!tail.is_constant()) {
    tail = primitive_part_in(tail, var, content_in(tail, var));
  }
  return (cg * tail).monic(glex);
}

}  // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  check_same_arity(a, b);
  MonomialOrder glex = MonomialOrder::graded_lex();
  if (a.is_zero()) return b.monic(glex);
  if (b.is_zero()) return a.monic(glex);
  return gcd_rec(a, b).monic(glex);
}

}  // namespace ratsys
