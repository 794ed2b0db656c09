#include "ratsys/canform.hpp"

#include <sstream>
#include <utility>

namespace ratsys {

namespace {

// Minimal term dump for error messages (generic variable names x1..xn).
std::string describe_poly(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [exps, coeff] : p.sorted_terms(MonomialOrder::graded_lex())) {
    if (!first) out << " + ";
    first = false;
    out << rat_to_string(coeff);
    for (int i = 0; i < static_cast<int>(exps.size()); ++i) {
      if (exps[i] == 0) continue;
      out << "*x" << (i + 1);
      if (exps[i] > 1) out << "^" << exps[i];
    }
  }
  return out.str();
}

Polynomial denominator_product(int nvars,
                               const std::vector<RationalFunction>& functions,
                               Polynomial start) {
  Polynomial product = std::move(start);
  for (const auto& r : functions) {
    if (!r.denominator().is_one()) product = product * r.denominator();
  }
  (void)nvars;
  return product;
}

Ideal principal_exception_ideal(int nvars, const Polynomial& product) {
  if (product.is_constant()) {
    return Ideal(nvars, {Polynomial::constant(nvars, 1)});
  }
  return Ideal(nvars, {product});
}

// diff = composed - coordinate must vanish on the variety away from the
// exception product and the compositional denominator.
void verify_side(const Variety& variety, const std::vector<RationalFunction>& maps,
                 const std::vector<RationalFunction>& images,
                 const Polynomial& exceptions, const char* side,
                 const Budget& budget) {
  const int nvars = variety.nvars();
  for (int i = 0; i < static_cast<int>(maps.size()); ++i) {
    RationalFunction composed = maps[i].substituted(images);
    RationalFunction diff = composed - RationalFunction::variable(nvars, i);
    if (diff.is_zero()) continue;
    Polynomial factor = exceptions;
    if (!diff.denominator().is_one()) factor = factor * diff.denominator();
    Ideal cleared = factor.is_constant()
                        ? variety.ideal()
                        : saturate(variety.ideal(), factor, budget);
    if (!ideal_contains(cleared, diff.numerator(), budget)) {
      std::ostringstream msg;
      msg << "birational map verification failed: " << side
          << " composition does not restore coordinate " << (i + 1);
      throw error(msg.str());
    }
  }
}

}  // namespace

BirationalMap make_birational_map(
    const Variety& source, const Variety& target,
    std::vector<RationalFunction> forward, std::vector<RationalFunction> inverse,
    const std::vector<Polynomial>& extra_source_factors,
    const std::vector<Polynomial>& extra_target_factors, const Budget& budget) {
  const int n = source.nvars();
  const int m = target.nvars();
  if (static_cast<int>(forward.size()) != m) {
    throw error("birational map: forward component count must equal the "
                "target variable count");
  }
  if (static_cast<int>(inverse.size()) != n) {
    throw error("birational map: inverse component count must equal the "
                "source variable count");
  }
  for (const auto& r : forward) {
    if (r.nvars() != n) throw error("birational map: forward arity mismatch");
  }
  for (const auto& r : inverse) {
    if (r.nvars() != m) throw error("birational map: inverse arity mismatch");
  }

  Polynomial source_product =
      denominator_product(n, forward, Polynomial::constant(n, 1));
  for (const auto& p : extra_source_factors) {
    if (!p.is_zero() && !p.is_constant()) source_product = source_product * p;
  }
  Polynomial target_product =
      denominator_product(m, inverse, Polynomial::constant(m, 1));
  for (const auto& p : extra_target_factors) {
    if (!p.is_zero() && !p.is_constant()) target_product = target_product * p;
  }

  verify_side(source, inverse, forward, source_product, "inverse-after-forward",
              budget);
  verify_side(target, forward, inverse, target_product, "forward-after-inverse",
              budget);

  BirationalMap map{source,
                    target,
                    std::move(forward),
                    std::move(inverse),
                    principal_exception_ideal(n, source_product),
                    principal_exception_ideal(m, target_product)};
  return map;
}

BirationalMap identity_map(const Variety& variety) {
  const int n = variety.nvars();
  std::vector<RationalFunction> coords;
  coords.reserve(n);
  for (int i = 0; i < n; ++i) coords.push_back(RationalFunction::variable(n, i));
  return make_birational_map(variety, variety, coords, coords);
}

OcfReport is_ocf(const RationalSystem& system, const Budget& budget) {
  const int n = system.n();
  OcfReport report;
  report.controllability_assumed = system.assumptions.algebraically_controllable;

  if (system.h != RationalFunction::variable(n, 0)) {
    report.violations.push_back(
        {"output_not_first_coordinate", -1, "h must equal x1"});
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (system.f0[i] != RationalFunction::variable(n, i + 1)) {
      std::ostringstream detail;
      detail << "drift component " << (i + 1) << " must equal x" << (i + 2);
      report.violations.push_back({"drift_not_chain", i, detail.str()});
    }
  }

  const RationalFunction& gain = system.f1[n - 1];
  report.fn1_nonvanishing =
      !vanishes_on_variety(gain.numerator(), system.X.ideal(), budget);
  if (!report.fn1_nonvanishing) {
    report.violations.push_back(
        {"input_gain_vanishes", n - 1,
         "f_{n,1} vanishes identically on the variety"});
  }

  report.is_ocf = report.violations.empty() && report.controllability_assumed;
  return report;
}

RationalSystem apply_map(const RationalSystem& system, const BirationalMap& map,
                         const Budget& budget) {
  const int n = system.n();
  const int m = map.target.nvars();
  if (map.source.nvars() != n ||
      !ideal_equal(map.source.ideal(), system.X.ideal(), budget)) {
    throw error("apply_map: map source does not match the system variety");
  }

  bool on_exception = true;
  for (const auto& g : map.exception_source.generators()) {
    if (g.evaluate(system.x0) != 0) {
      on_exception = false;
      break;
    }
  }
  if (on_exception) {
    throw error("apply_map: initial state lies on the exception locus of the map");
  }

  const GroebnerBasis& target_basis =
      map.target.ideal().basis(MonomialOrder::graded_lex(), budget);
  auto reduce = [&](const RationalFunction& r) {
    Polynomial num = normal_form(r.numerator(), target_basis);
    Polynomial den = normal_form(r.denominator(), target_basis);
    if (den.is_zero()) {
      throw error("apply_map: a transformed denominator vanishes identically "
                  "on the image variety");
    }
    return RationalFunction(std::move(num), std::move(den));
  };
  auto transform = [&](const RationalFunction& g) {
    return reduce(g.substituted(map.inverse));
  };

  RationalSystem out{map.target, {}, {}, {}, transform(system.h), {},
                     system.input_values, system.assumptions};
  out.variables.reserve(m);
  for (int j = 0; j < m; ++j) out.variables.push_back("x" + std::to_string(j + 1));
  out.f0.reserve(m);
  out.f1.reserve(m);
  for (int j = 0; j < m; ++j) {
    out.f0.push_back(transform(lie_derivative(map.forward[j], system.f0)));
    out.f1.push_back(transform(lie_derivative(map.forward[j], system.f1)));
  }
  out.x0.reserve(m);
  for (int j = 0; j < m; ++j) out.x0.push_back(map.forward[j].evaluate(system.x0));
  return out;
}

CanonicalizationResult to_ocf(const RationalSystem& system,
                              const ObsOptions& options, const Budget& budget) {
  const int n = system.n();
  ValidationReport validation = validate_system(system, budget);
  if (!validation.ok()) {
    std::ostringstream msg;
    msg << "to_ocf: system failed validation:";
    for (const auto& v : validation.violations) msg << " [" << v << "]";
    throw error(msg.str());
  }
  if (!system.assumptions.algebraically_controllable ||
      !system.assumptions.no_algebraic_gap) {
    throw error("to_ocf: algebraic controllability and the no-algebraic-gap "
                "assumption must both be asserted");
  }

  ObservabilityReport obs = rationally_observable(system, options, budget);
  if (!obs.rationally_observable) {
    std::ostringstream msg;
    msg << "to_ocf: system is not rationally observable (trdeg "
        << obs.trdeg_obs << ", dim " << obs.dim_X << ")";
    throw error(msg.str());
  }
  std::vector<RationalFunction> chain_elements = obs.chain.flattened();

  // Smallest drift-chain prefix whose field contains every chain generator.
  std::vector<RationalFunction> b{system.h};
  for (;;) {
    bool generates = true;
    for (const auto& g : chain_elements) {
      if (!field_membership(g, b, system.X, budget)) {
        generates = false;
        break;
      }
    }
    if (generates) break;
    if (static_cast<int>(b.size()) > options.k_max) {
      throw error("to_ocf: drift chain did not generate the observation field "
                  "within k_max iterations");
    }
    RationalFunction next = lie_derivative(b.back(), system.f0);
    if (next.is_zero()) {
      throw error("to_ocf: drift chain reached a zero derivative before "
                  "generating the observation field");
    }
    b.push_back(std::move(next));
  }
  const int m = static_cast<int>(b.size());

  // Graph ideal of t = b(x) over X, with the ambient variables first.
  const int total = n + m;
  std::vector<Polynomial> graph_gens;
  for (const auto& g : system.X.ideal().generators()) {
    graph_gens.push_back(g.extended(total));
  }
  Polynomial chain_dens = Polynomial::constant(total, 1);
  for (int i = 0; i < m; ++i) {
    Polynomial ti = Polynomial::variable(total, n + i);
    graph_gens.push_back(b[i].denominator().extended(total) * ti -
                         b[i].numerator().extended(total));
    if (!b[i].denominator().is_one()) {
      chain_dens = chain_dens * b[i].denominator().extended(total);
    }
  }
  Ideal graph(total, std::move(graph_gens));
  if (!chain_dens.is_constant()) graph = saturate(graph, chain_dens, budget);

  std::vector<int> tag_vars;
  for (int i = 0; i < m; ++i) tag_vars.push_back(n + i);
  Ideal image = restrict_ideal(eliminate(graph, tag_vars, budget), tag_vars);
  Variety target(m, image.generators());

  // The inverse map is read off the lex basis (ambient variables most
  // significant): elements of the shape A(t) x_i - B(t).
  const GroebnerBasis& lex_basis = graph.basis(MonomialOrder::lex(), budget);
  std::vector<RationalFunction> inverse;
  for (int i = 0; i < n; ++i) {
    std::optional<RationalFunction> recovered;
    for (const auto& g : lex_basis.elements) {
      if (g.degree_in(i) != 1) continue;
      bool clean = true;
      for (int j = 0; j < n && clean; ++j) {
        if (j != i && g.involves(j)) clean = false;
      }
      if (!clean) continue;
      Polynomial coeff(total);
      Polynomial rest(total);
      for (const auto& [exps, c] : g.terms()) {
        if (exps[i] == 1) {
          Exps reduced = exps;
          reduced[i] = 0;
          coeff.add_term(reduced, c);
        } else {
          rest.add_term(exps, c);
        }
      }
      recovered = RationalFunction(-rest.restricted(tag_vars),
                                   coeff.restricted(tag_vars));
      break;
    }
    if (!recovered) {
      std::ostringstream msg;
      msg << "to_ocf: no basis element linear in x" << (i + 1)
          << "; inverse extraction failed. Lex basis:";
      for (const auto& g : lex_basis.elements) {
        msg << " {" << describe_poly(g) << "}";
      }
      throw error(msg.str());
    }
    inverse.push_back(std::move(*recovered));
  }

  BirationalMap map = make_birational_map(system.X, target, b, inverse,
                                          system.denominators(), {}, budget);

  RationalSystem out = apply_map(system, map, budget);

  if (out.h != RationalFunction::variable(m, 0)) {
    throw error("to_ocf: transformed output does not reduce to the first "
                "chain coordinate (affine relation among chain elements)");
  }
  for (int i = 0; i + 1 < m; ++i) {
    if (out.f0[i] != RationalFunction::variable(m, i + 1)) {
      throw error("to_ocf: transformed drift does not reduce to the chain "
                  "coordinate (affine relation among chain elements)");
    }
  }

  // Final exception locus on the image side: inverse denominators, the
  // transformed system's denominators, and the input-gain numerator as the
  // nonvanishing witness.
  Polynomial target_product =
      denominator_product(m, map.inverse, Polynomial::constant(m, 1));
  for (const auto& q : out.denominators()) target_product = target_product * q;
  const RationalFunction& gain = out.f1[m - 1];
  if (!gain.is_zero() && !gain.numerator().is_constant()) {
    target_product = target_product * gain.numerator();
  }
  map.exception_target = principal_exception_ideal(m, target_product);

  return CanonicalizationResult{std::move(out), std::move(map), m};
}

bool systems_structurally_equal(const RationalSystem& a,
                                const RationalSystem& b, const Budget& budget) {
  if (a.n() != b.n()) return false;
  if (!ideal_equal(a.X.ideal(), b.X.ideal(), budget)) return false;
  if (a.f0 != b.f0 || a.f1 != b.f1 || a.h != b.h) return false;
  return a.x0 == b.x0;
}

bool ocf_identical(const RationalSystem& a, const RationalSystem& b,
                   const Budget& budget) {
  if (!is_ocf(a, budget).is_ocf || !is_ocf(b, budget).is_ocf) {
    throw error("ocf_identical: both systems must be in observable canonical "
                "form");
  }
  return systems_structurally_equal(a, b, budget);
}

}  // namespace ratsys
