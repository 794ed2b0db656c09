#include "ratsys/groebner.hpp"

#include <algorithm>
#include <set>

namespace ratsys {

namespace {

std::mutex g_budget_mutex;
Budget g_budget{};

// Full reduction of p by the (monic) reducers. When budget is non-null the
// intermediate total degree is capped.
Polynomial reduce_full(const Polynomial& p,
                       const std::vector<Polynomial>& reducers,
                       const std::vector<Exps>& leading,
                       const MonomialOrder& order, const Budget* budget,
                       long pairs_used) {
  Polynomial work = p;
  Polynomial remainder(p.nvars());
  while (!work.is_zero()) {
    if (budget && work.total_degree() > budget->max_degree) {
      throw budget_error(
          "degree budget exceeded during reduction (max degree " +
              std::to_string(budget->max_degree) + ")",
          pairs_used, work.total_degree());
    }
    auto [lm, lc] = work.leading_term(order);
    bool reduced = false;
    for (std::size_t k = 0; k < reducers.size(); ++k) {
      if (!exps_divides(leading[k], lm)) continue;
      Polynomial t = Polynomial::monomial(p.nvars(), exps_div(lm, leading[k]),
                                          lc / reducers[k].terms().at(leading[k]));
      work -= t * reducers[k];
      reduced = true;
      break;
    }
    if (!reduced) {
      remainder.add_term(lm, lc);
      work.add_term(lm, -lc);
    }
  }
  return remainder;
}

struct SPair {
  int i;
  int j;
  Exps lcm;
  int sugar;
};

struct SPairLess {
  MonomialOrder order;
  bool operator()(const SPair& a, const SPair& b) const {
    if (a.sugar != b.sugar) return a.sugar < b.sugar;
    if (a.lcm != b.lcm) return order.less(a.lcm, b.lcm);
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  }
};

}  // namespace

Budget default_budget() {
  std::lock_guard<std::mutex> lock(g_budget_mutex);
  return g_budget;
}

void set_default_budget(const Budget& budget) {
  std::lock_guard<std::mutex> lock(g_budget_mutex);
  g_budget = budget;
}

bool GroebnerBasis::is_trivial_unit() const {
  return elements.size() == 1 && elements[0].is_one();
}

GroebnerBasis buchberger(const std::vector<Polynomial>& generators, int nvars,
                         const MonomialOrder& order, const Budget& budget) {
  std::vector<Polynomial> basis;
  std::vector<Exps> leading;
  std::vector<int> sugars;
  for (const auto& g : generators) {
    if (g.nvars() != nvars) throw error("generator arity mismatch");
    if (g.is_zero()) continue;
    if (g.total_degree() > budget.max_degree) {
      throw budget_error("degree budget exceeded by an input generator (max "
                             "degree " + std::to_string(budget.max_degree) + ")",
                         0, g.total_degree());
    }
    basis.push_back(g.monic(order));
    leading.push_back(basis.back().leading_monomial(order));
    sugars.push_back(basis.back().total_degree());
  }

  SPairLess cmp{order};
  std::set<SPair, SPairLess> pending(cmp);
  std::set<std::pair<int, int>> pending_keys;
  auto push_pair = [&](int i, int j) {
    Exps lcm = exps_lcm(leading[i], leading[j]);
    int sugar = std::max(
        sugars[i] + exps_total_degree(lcm) - exps_total_degree(leading[i]),
        sugars[j] + exps_total_degree(lcm) - exps_total_degree(leading[j]));
    pending.insert(SPair{i, j, std::move(lcm), sugar});
    pending_keys.emplace(i, j);
  };
  for (std::size_t j = 1; j < basis.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      push_pair(static_cast<int>(i), static_cast<int>(j));
    }
  }

  long pairs_used = 0;
  while (!pending.empty()) {
    SPair pair = *pending.begin();
    pending.erase(pending.begin());
    pending_keys.erase({pair.i, pair.j});

    if (++pairs_used > budget.max_pairs) {
      throw budget_error("pair budget exceeded (max " +
                             std::to_string(budget.max_pairs) + " pairs)",
                         pairs_used, 0);
    }
    // Product criterion: coprime leading monomials reduce to zero.
    if (exps_coprime(leading[pair.i], leading[pair.j])) continue;
    // Chain criterion: a third element divides the lcm and both side pairs
    // have already been handled.
    bool skip = false;
    for (std::size_t k = 0; k < basis.size() && !skip; ++k) {
      int ki = static_cast<int>(k);
      if (ki == pair.i || ki == pair.j) continue;
      if (!exps_divides(leading[k], pair.lcm)) continue;
      auto key_ik = std::minmax(pair.i, ki);
      auto key_jk = std::minmax(pair.j, ki);
      if (!pending_keys.count({key_ik.first, key_ik.second}) &&
          !pending_keys.count({key_jk.first, key_jk.second})) {
        skip = true;
      }
    }
    if (skip) continue;

    Polynomial lhs =
        Polynomial::monomial(nvars, exps_div(pair.lcm, leading[pair.i]), Rat(1)) *
        basis[pair.i];
    Polynomial rhs =
        Polynomial::monomial(nvars, exps_div(pair.lcm, leading[pair.j]), Rat(1)) *
        basis[pair.j];
    Polynomial spoly = lhs - rhs;
    Polynomial reduced =
        reduce_full(spoly, basis, leading, order, &budget, pairs_used);
    if (reduced.is_zero()) continue;

    basis.push_back(reduced.monic(order));
    leading.push_back(basis.back().leading_monomial(order));
    sugars.push_back(std::max(pair.sugar, basis.back().total_degree()));
    int newest = static_cast<int>(basis.size()) - 1;
    for (int i = 0; i < newest; ++i) push_pair(i, newest);
  }

  // Minimalize: drop elements whose leading monomial another one divides.
  std::vector<bool> keep(basis.size(), true);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size() && keep[i]; ++j) {
      if (i == j || !keep[j]) continue;
      if (exps_divides(leading[j], leading[i]) &&
          (leading[j] != leading[i] || j < i)) {
        keep[i] = false;
      }
    }
  }
  std::vector<Polynomial> minimal;
  std::vector<Exps> minimal_lm;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (keep[i]) {
      minimal.push_back(basis[i]);
      minimal_lm.push_back(leading[i]);
    }
  }

  // Interreduce tails until stable.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      std::vector<Polynomial> others;
      std::vector<Exps> others_lm;
      for (std::size_t j = 0; j < minimal.size(); ++j) {
        if (j == i) continue;
        others.push_back(minimal[j]);
        others_lm.push_back(minimal_lm[j]);
      }
      Polynomial r =
          reduce_full(minimal[i], others, others_lm, order, nullptr, 0)
              .monic(order);
      if (r != minimal[i]) {
        minimal[i] = std::move(r);
        minimal_lm[i] = minimal[i].leading_monomial(order);
        changed = true;
      }
    }
  }

  std::vector<std::size_t> perm(minimal.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return order.less(minimal_lm[a], minimal_lm[b]);
  });
  GroebnerBasis out;
  out.order = order;
  for (std::size_t i : perm) out.elements.push_back(std::move(minimal[i]));
  return out;
}

Ideal::Ideal(int nvars, std::vector<Polynomial> generators)
    : nvars_(nvars), cache_(std::make_shared<Cache>()) {
  for (auto& g : generators) {
    if (g.nvars() != nvars_) throw error("generator arity mismatch");
    if (!g.is_zero()) generators_.push_back(std::move(g));
  }
}

const GroebnerBasis& Ideal::basis(const MonomialOrder& order,
                                  const Budget& budget) const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto it = cache_->entries.find(order);
  if (it == cache_->entries.end()) {
    auto computed = std::make_shared<const GroebnerBasis>(
        buchberger(generators_, nvars_, order, budget));
    it = cache_->entries.emplace(order, std::move(computed)).first;
  }
  return *it->second;
}

Polynomial normal_form(const Polynomial& p, const GroebnerBasis& basis) {
  std::vector<Exps> leading;
  leading.reserve(basis.elements.size());
  for (const auto& g : basis.elements) {
    leading.push_back(g.leading_monomial(basis.order));
  }
  return reduce_full(p, basis.elements, leading, basis.order, nullptr, 0);
}

bool ideal_contains(const Ideal& ideal, const Polynomial& p,
                    const Budget& budget) {
  if (p.is_zero()) return true;
  return normal_form(p, ideal.basis(MonomialOrder::graded_lex(), budget))
      .is_zero();
}

bool ideal_equal(const Ideal& a, const Ideal& b, const Budget& budget) {
  if (a.nvars() != b.nvars()) return false;
  const auto& ga = a.basis(MonomialOrder::graded_lex(), budget);
  const auto& gb = b.basis(MonomialOrder::graded_lex(), budget);
  return ga.elements == gb.elements;
}

Ideal eliminate(const Ideal& ideal, const std::vector<int>& keep,
                const Budget& budget) {
  int n = ideal.nvars();
  std::vector<bool> kept(n, false);
  for (int v : keep) {
    if (v < 0 || v >= n) throw error("eliminate(): variable index out of range");
    kept[v] = true;
  }
  std::vector<int> where(n, -1);
  int front = 0;
  for (int i = 0; i < n; ++i) {
    if (!kept[i]) where[i] = front++;
  }
  int back = front;
  for (int i = 0; i < n; ++i) {
    if (kept[i]) where[i] = back++;
  }

  std::vector<Polynomial> permuted;
  permuted.reserve(ideal.generators().size());
  for (const auto& g : ideal.generators()) permuted.push_back(g.permuted(where));
  GroebnerBasis gb =
      buchberger(permuted, n, MonomialOrder::block_elim(front), budget);

  std::vector<int> inverse(n);
  for (int i = 0; i < n; ++i) inverse[where[i]] = i;
  std::vector<Polynomial> selected;
  for (const auto& g : gb.elements) {
    bool pure = true;
    for (const auto& [e, c] : g.terms()) {
      for (int i = 0; i < front && pure; ++i) {
        if (e[i] > 0) pure = false;
      }
      if (!pure) break;
    }
    if (pure) selected.push_back(g.permuted(inverse));
  }
  return Ideal(n, std::move(selected));
}

Ideal saturate(const Ideal& ideal, const Polynomial& q, const Budget& budget) {
  if (q.nvars() != ideal.nvars()) throw error("saturation arity mismatch");
  if (q.is_zero()) throw error("saturation by the zero polynomial");
  if (q.is_constant()) return ideal;
  int n = ideal.nvars();
  std::vector<Polynomial> gens;
  gens.reserve(ideal.generators().size() + 1);
  for (const auto& g : ideal.generators()) gens.push_back(g.extended(n + 1));
  Polynomial one = Polynomial::constant(n + 1, Rat(1));
  gens.push_back(one - Polynomial::variable(n + 1, n) * q.extended(n + 1));

  std::vector<int> keep(n);
  for (int i = 0; i < n; ++i) keep[i] = i;
  Ideal extended_result = eliminate(Ideal(n + 1, std::move(gens)), keep, budget);
  std::vector<Polynomial> back;
  for (const auto& g : extended_result.generators()) {
    back.push_back(g.restricted(keep));
  }
  return Ideal(n, std::move(back));
}

bool vanishes_on_variety(const Polynomial& p, const Ideal& ideal,
                         const Budget& budget) {
  if (p.nvars() != ideal.nvars()) throw error("variety arity mismatch");
  if (p.is_zero()) return true;
  int n = ideal.nvars();
  std::vector<Polynomial> gens;
  gens.reserve(ideal.generators().size() + 1);
  for (const auto& g : ideal.generators()) gens.push_back(g.extended(n + 1));
  Polynomial one = Polynomial::constant(n + 1, Rat(1));
  gens.push_back(one - Polynomial::variable(n + 1, n) * p.extended(n + 1));
  GroebnerBasis gb = buchberger(gens, n + 1, MonomialOrder::graded_lex(), budget);
  return gb.is_trivial_unit();
}

int ideal_dimension(const Ideal& ideal, const Budget& budget) {
  int n = ideal.nvars();
  if (ideal.generators().empty()) return n;
  const GroebnerBasis& gb = ideal.basis(MonomialOrder::graded_lex(), budget);
  if (gb.is_trivial_unit()) throw error("dimension of the unit ideal");
  if (gb.elements.empty()) return n;
  if (n > 24) throw error("dimension computation limited to 24 variables");

  std::vector<unsigned> supports;
  supports.reserve(gb.elements.size());
  for (const auto& g : gb.elements) {
    const Exps& lm = g.leading_monomial(gb.order);
    unsigned mask = 0;
    for (int i = 0; i < n; ++i) {
      if (lm[i] > 0) mask |= 1u << i;
    }
    supports.push_back(mask);
  }
  int best = 0;
  for (unsigned subset = 0; subset < (1u << n); ++subset) {
    bool independent = true;
    for (unsigned s : supports) {
      if ((s & ~subset) == 0) {
        independent = false;
        break;
      }
    }
    if (independent) best = std::max(best, __builtin_popcount(subset));
  }
  return best;
}

Ideal restrict_ideal(const Ideal& ideal, const std::vector<int>& keep) {
  std::vector<Polynomial> gens;
  gens.reserve(ideal.generators().size());
  for (const auto& g : ideal.generators()) gens.push_back(g.restricted(keep));
  return Ideal(static_cast<int>(keep.size()), std::move(gens));
}

}  // namespace ratsys
