#include "ratsys/exprio.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

namespace ratsys {

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

struct Token {
  enum class Kind { Ident, Integer, Plus, Minus, Star, Slash, Caret, LParen,
                    RParen, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t position = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
      if (j < text.size() && text[j] == '.') {
        throw parse_error("decimal literals are not supported", j);
      }
      tokens.push_back({Token::Kind::Integer, text.substr(i, j - i), start});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      tokens.push_back({Token::Kind::Ident, text.substr(i, j - i), start});
      i = j;
      continue;
    }
    Token::Kind kind;
    switch (c) {
      case '+': kind = Token::Kind::Plus; break;
      case '-': kind = Token::Kind::Minus; break;
      case '*': kind = Token::Kind::Star; break;
      case '/': kind = Token::Kind::Slash; break;
      case '^': kind = Token::Kind::Caret; break;
      case '(': kind = Token::Kind::LParen; break;
      case ')': kind = Token::Kind::RParen; break;
      default:
        throw parse_error(std::string("unexpected character '") + c + "'", i);
    }
    tokens.push_back({kind, std::string(1, c), start});
    ++i;
  }
  tokens.push_back({Token::Kind::End, "", text.size()});
  return tokens;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::vector<std::string>& variables)
      : tokens_(std::move(tokens)), variables_(variables) {}

  RationalFunction parse() {
    RationalFunction result = parse_expr();
    if (peek().kind != Token::Kind::End) {
      throw parse_error("unexpected trailing input", peek().position);
    }
    return result;
  }

 private:
  const Token& peek() const { return tokens_[cursor_]; }
  const Token& advance() { return tokens_[cursor_++]; }
  bool match(Token::Kind kind) {
    if (peek().kind == kind) {
      ++cursor_;
      return true;
    }
    return false;
  }

  int nvars() const { return static_cast<int>(variables_.size()); }

  RationalFunction parse_expr() {
    bool negate = false;
    if (match(Token::Kind::Minus)) {
      negate = true;
    } else {
      match(Token::Kind::Plus);
    }
    RationalFunction acc = parse_term();
    if (negate) acc = -acc;
    for (;;) {
      if (match(Token::Kind::Plus)) {
        acc = acc + parse_term();
      } else if (match(Token::Kind::Minus)) {
        acc = acc - parse_term();
      } else {
        return acc;
      }
    }
  }

  RationalFunction parse_term() {
    RationalFunction acc = parse_factor();
    for (;;) {
      if (match(Token::Kind::Star)) {
        acc = acc * parse_factor();
      } else if (peek().kind == Token::Kind::Slash) {
        std::size_t at = peek().position;
        advance();
        RationalFunction divisor = parse_factor();
        if (divisor.is_zero()) {
          throw parse_error("division by the zero polynomial", at);
        }
        acc = acc / divisor;
      } else {
        return acc;
      }
    }
  }

  RationalFunction parse_factor() {
    RationalFunction base = parse_base();
    if (!match(Token::Kind::Caret)) return base;
    const Token& exp = peek();
    if (exp.kind != Token::Kind::Integer) {
      throw parse_error("exponent must be a nonnegative integer", exp.position);
    }
    advance();
    if (exp.text.size() > 6) {
      throw parse_error("exponent too large", exp.position);
    }
    return base.pow(std::stoi(exp.text));
  }

  RationalFunction parse_base() {
    const Token& token = peek();
    switch (token.kind) {
      case Token::Kind::Integer: {
        advance();
        return RationalFunction::constant(nvars(), Rat(token.text));
      }
      case Token::Kind::Ident: {
        advance();
        for (int i = 0; i < nvars(); ++i) {
          if (variables_[i] == token.text) {
            return RationalFunction::variable(nvars(), i);
          }
        }
        throw parse_error("unknown variable '" + token.text + "'",
                          token.position);
      }
      case Token::Kind::LParen: {
        advance();
        RationalFunction inner = parse_expr();
        if (!match(Token::Kind::RParen)) {
          throw parse_error("expected ')'", peek().position);
        }
        return inner;
      }
      default:
        throw parse_error("expected a variable, integer or '('",
                          token.position);
    }
  }

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
  const std::vector<std::string>& variables_;
};

std::string render_monomial(const Exps& exps,
                            const std::vector<std::string>& variables) {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    if (!first) out << "*";
    first = false;
    out << variables[i];
    if (exps[i] > 1) out << "^" << exps[i];
  }
  return out.str();
}

Rat json_to_rat(const ordered_json& value, const std::string& where) {
  if (value.is_number_integer()) {
    return rat_from_string(std::to_string(value.get<long long>()));
  }
  if (value.is_string()) {
    return rat_from_string(value.get<std::string>());
  }
  throw error(where + ": expected an integer or a \"p/q\" string");
}

std::string expression_at(const ordered_json& value, const std::string& where) {
  if (!value.is_string()) throw error(where + ": expected an expression string");
  return value.get<std::string>();
}

// Parse entry points that prefix failures with the document path.
RationalFunction rational_at(const ordered_json& value, const std::string& where,
                             const std::vector<std::string>& variables) {
  std::string text = expression_at(value, where);
  try {
    return parse_rational(text, variables);
  } catch (const error& e) {
    throw error(where + ": " + e.what());
  }
}

Polynomial polynomial_at(const ordered_json& value, const std::string& where,
                         const std::vector<std::string>& variables) {
  std::string text = expression_at(value, where);
  try {
    return parse_polynomial(text, variables);
  } catch (const error& e) {
    throw error(where + ": " + e.what());
  }
}

std::vector<std::string> identifier_list(const ordered_json& value,
                                         const std::string& where) {
  if (!value.is_array() || value.empty()) {
    throw error(where + ": expected a nonempty array of identifiers");
  }
  std::vector<std::string> names;
  for (const auto& entry : value) {
    if (!entry.is_string() || !is_identifier(entry.get<std::string>())) {
      throw error(where + ": entries must be identifiers");
    }
    names.push_back(entry.get<std::string>());
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      if (names[i] == names[j]) {
        throw error(where + ": duplicate identifier '" + names[i] + "'");
      }
    }
  }
  return names;
}

ordered_json finite_or_null(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

}  // namespace

RationalFunction parse_rational(const std::string& text,
                                const std::vector<std::string>& variables) {
  Parser parser(tokenize(text), variables);
  return parser.parse();
}

Polynomial parse_polynomial(const std::string& text,
                            const std::vector<std::string>& variables) {
  RationalFunction r = parse_rational(text, variables);
  if (!r.is_polynomial()) {
    throw parse_error("expected a polynomial, got a proper rational function", 0);
  }
  return r.numerator();
}

std::string render_polynomial(const Polynomial& p,
                              const std::vector<std::string>& variables) {
  if (p.is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [exps, coeff] : p.sorted_terms(MonomialOrder::graded_lex())) {
    Rat magnitude = coeff < 0 ? Rat(-coeff) : coeff;
    if (first) {
      if (coeff < 0) out << "-";
      first = false;
    } else {
      out << (coeff < 0 ? " - " : " + ");
    }
    std::string mono = render_monomial(exps, variables);
    if (mono.empty()) {
      out << rat_to_string(magnitude);
    } else if (magnitude == 1) {
      out << mono;
    } else {
      out << rat_to_string(magnitude) << "*" << mono;
    }
  }
  return out.str();
}

std::string render_rational(const RationalFunction& r,
                            const std::vector<std::string>& variables) {
  if (r.is_polynomial()) return render_polynomial(r.numerator(), variables);
  return "(" + render_polynomial(r.numerator(), variables) + ")/(" +
         render_polynomial(r.denominator(), variables) + ")";
}

RationalSystem system_from_json(const ordered_json& doc) {
  if (!doc.is_object()) throw error("system document: expected a JSON object");

  if (!doc.contains("variables")) throw error("system document: missing 'variables'");
  std::vector<std::string> variables =
      identifier_list(doc.at("variables"), "variables");
  const int n = static_cast<int>(variables.size());

  std::vector<Polynomial> defining;
  if (doc.contains("variety")) {
    const auto& entries = doc.at("variety");
    if (!entries.is_array()) throw error("variety: expected an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      defining.push_back(polynomial_at(
          entries[i], "variety[" + std::to_string(i) + "]", variables));
    }
  }

  std::optional<Parametrization> parametrization;
  if (doc.contains("parametrization")) {
    const auto& par = doc.at("parametrization");
    if (!par.is_object() || !par.contains("parameters") || !par.contains("images")) {
      throw error("parametrization: expected {\"parameters\": [...], \"images\": [...]}");
    }
    Parametrization p;
    p.parameter_names = identifier_list(par.at("parameters"),
                                        "parametrization.parameters");
    const auto& images = par.at("images");
    if (!images.is_array() || static_cast<int>(images.size()) != n) {
      throw error("parametrization.images: expected one expression per variable");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
      p.images.push_back(rational_at(
          images[i], "parametrization.images[" + std::to_string(i) + "]",
          p.parameter_names));
    }
    parametrization = std::move(p);
  }

  auto field_vector = [&](const char* key) {
    if (!doc.contains(key)) {
      throw error(std::string("system document: missing '") + key + "'");
    }
    const auto& entries = doc.at(key);
    if (!entries.is_array() || static_cast<int>(entries.size()) != n) {
      throw error(std::string(key) + ": expected " + std::to_string(n) +
                  " expressions");
    }
    VectorField field;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      field.push_back(rational_at(
          entries[i], std::string(key) + "[" + std::to_string(i) + "]",
          variables));
    }
    return field;
  };

  VectorField f0 = field_vector("f0");
  VectorField f1 = field_vector("f1");

  if (!doc.contains("h")) throw error("system document: missing 'h'");
  RationalFunction h = rational_at(doc.at("h"), "h", variables);

  if (!doc.contains("x0")) throw error("system document: missing 'x0'");
  const auto& x0_doc = doc.at("x0");
  if (!x0_doc.is_array() || static_cast<int>(x0_doc.size()) != n) {
    throw error("x0: expected " + std::to_string(n) + " rationals");
  }
  std::vector<Rat> x0;
  for (std::size_t i = 0; i < x0_doc.size(); ++i) {
    x0.push_back(json_to_rat(x0_doc[i], "x0[" + std::to_string(i) + "]"));
  }

  if (!doc.contains("input_values")) {
    throw error("system document: missing 'input_values'");
  }
  const auto& iv_doc = doc.at("input_values");
  if (!iv_doc.is_array()) throw error("input_values: expected an array");
  std::vector<Rat> input_values;
  for (std::size_t i = 0; i < iv_doc.size(); ++i) {
    input_values.push_back(
        json_to_rat(iv_doc[i], "input_values[" + std::to_string(i) + "]"));
  }

  Assumptions assumptions;
  if (doc.contains("assumptions")) {
    const auto& a = doc.at("assumptions");
    if (!a.is_object()) throw error("assumptions: expected an object");
    for (const char* key : {"algebraically_controllable", "no_algebraic_gap"}) {
      if (a.contains(key) && !a.at(key).is_boolean()) {
        throw error(std::string("assumptions.") + key + ": expected a boolean");
      }
    }
    assumptions.algebraically_controllable =
        a.value("algebraically_controllable", false);
    assumptions.no_algebraic_gap = a.value("no_algebraic_gap", false);
  }

  Variety X(n, std::move(defining), std::move(parametrization));
  return RationalSystem{std::move(X),   std::move(variables), std::move(f0),
                        std::move(f1),  std::move(h),         std::move(x0),
                        std::move(input_values), assumptions};
}

RationalSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open '" + path + "'");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw error("invalid JSON in '" + path + "': " + e.what());
  }
  return system_from_json(doc);
}

ordered_json system_to_json(const RationalSystem& system) {
  ordered_json doc;
  doc["variables"] = system.variables;
  ordered_json variety = ordered_json::array();
  for (const auto& p : system.X.ideal().generators()) {
    variety.push_back(render_polynomial(p, system.variables));
  }
  doc["variety"] = variety;
  if (system.X.parametrization()) {
    const auto& par = *system.X.parametrization();
    ordered_json images = ordered_json::array();
    for (const auto& r : par.images) {
      images.push_back(render_rational(r, par.parameter_names));
    }
    doc["parametrization"] = {{"parameters", par.parameter_names},
                              {"images", images}};
  }
  auto field = [&](const VectorField& f) {
    ordered_json entries = ordered_json::array();
    for (const auto& r : f) entries.push_back(render_rational(r, system.variables));
    return entries;
  };
  doc["f0"] = field(system.f0);
  doc["f1"] = field(system.f1);
  doc["h"] = render_rational(system.h, system.variables);
  ordered_json x0 = ordered_json::array();
  for (const auto& v : system.x0) x0.push_back(rat_to_string(v));
  doc["x0"] = x0;
  ordered_json iv = ordered_json::array();
  for (const auto& v : system.input_values) iv.push_back(rat_to_string(v));
  doc["input_values"] = iv;
  doc["assumptions"] = {
      {"algebraically_controllable", system.assumptions.algebraically_controllable},
      {"no_algebraic_gap", system.assumptions.no_algebraic_gap}};
  return doc;
}

ordered_json validation_to_json(const ValidationReport& report) {
  ordered_json doc;
  doc["ok"] = report.ok();
  doc["violations"] = report.violations;
  doc["caveats"] = report.caveats;
  return doc;
}

namespace {

ordered_json chain_to_json(const GeneratorChain& chain,
                           const std::vector<std::string>& variables) {
  ordered_json levels = ordered_json::array();
  for (const auto& level : chain.levels) {
    ordered_json entries = ordered_json::array();
    for (const auto& r : level) entries.push_back(render_rational(r, variables));
    levels.push_back(entries);
  }
  return levels;
}

}  // namespace

ordered_json observability_to_json(const ObservabilityReport& report,
                                   const std::vector<std::string>& variables) {
  ordered_json doc;
  doc["rationally_observable"] = report.rationally_observable;
  doc["trdeg_obs"] = report.trdeg_obs;
  doc["dim_X"] = report.dim_X;
  doc["method"] = report.method == TrdegMethod::EliminationExact
                      ? "exact"
                      : "jacobian";
  doc["stabilized"] = report.stabilized;
  doc["trdeg_trajectory"] = report.trdeg_trajectory;
  if (report.n_o) {
    doc["n_o"] = *report.n_o;
  } else {
    doc["n_o"] = nullptr;
  }
  doc["chain"] = chain_to_json(report.chain, variables);
  doc["caveats"] = report.caveats;
  return doc;
}

ordered_json index_to_json(const IndexResult& result,
                           const std::vector<std::string>& variables) {
  ordered_json doc;
  doc["n_o"] = result.n_o;
  doc["achieved_at_level"] = result.achieved_at_level;
  doc["trdeg_trajectory"] = result.trdeg_trajectory;
  doc["chain"] = chain_to_json(result.chain, variables);
  return doc;
}

ordered_json ocf_report_to_json(const OcfReport& report) {
  ordered_json doc;
  doc["is_ocf"] = report.is_ocf;
  doc["controllability_assumed"] = report.controllability_assumed;
  doc["fn1_nonvanishing"] = report.fn1_nonvanishing;
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    ordered_json entry;
    entry["code"] = v.code;
    if (v.index >= 0) {
      entry["index"] = v.index;
    } else {
      entry["index"] = nullptr;
    }
    entry["detail"] = v.detail;
    violations.push_back(entry);
  }
  doc["violations"] = violations;
  return doc;
}

ordered_json map_to_json(const BirationalMap& map,
                         const std::vector<std::string>& source_variables,
                         const std::vector<std::string>& target_variables) {
  ordered_json doc;
  ordered_json forward = ordered_json::array();
  for (const auto& r : map.forward) {
    forward.push_back(render_rational(r, source_variables));
  }
  doc["forward"] = forward;
  ordered_json inverse = ordered_json::array();
  for (const auto& r : map.inverse) {
    inverse.push_back(render_rational(r, target_variables));
  }
  doc["inverse"] = inverse;
  ordered_json exc_src = ordered_json::array();
  for (const auto& p : map.exception_source.generators()) {
    exc_src.push_back(render_polynomial(p, source_variables));
  }
  doc["exception_source"] = exc_src;
  ordered_json exc_tgt = ordered_json::array();
  for (const auto& p : map.exception_target.generators()) {
    exc_tgt.push_back(render_polynomial(p, target_variables));
  }
  doc["exception_target"] = exc_tgt;
  return doc;
}

ordered_json canonicalization_to_json(
    const CanonicalizationResult& result,
    const std::vector<std::string>& source_variables) {
  ordered_json doc;
  doc["n_o"] = result.n_o;
  doc["system"] = system_to_json(result.system);
  doc["map"] = map_to_json(result.map, source_variables,
                           result.system.variables);
  return doc;
}

ordered_json trajectory_to_json(const Trajectory& trajectory,
                                bool include_states) {
  ordered_json doc;
  doc["status"] = trajectory_status_name(trajectory.status);
  doc["stop_time"] = trajectory.stop_time;
  if (trajectory.detail.empty()) {
    doc["detail"] = nullptr;
  } else {
    doc["detail"] = trajectory.detail;
  }
  doc["max_variety_residual"] = trajectory.max_variety_residual;
  ordered_json samples;
  samples["t"] = trajectory.times;
  samples["y"] = trajectory.outputs;
  if (include_states) samples["x"] = trajectory.states;
  doc["samples"] = samples;
  return doc;
}

ordered_json probe_to_json(const ProbeReport& report) {
  ordered_json doc;
  doc["max_deviation"] = finite_or_null(report.max_deviation);
  doc["trials"] = report.trials;
  doc["compared_trials"] = report.compared_trials;
  doc["notes"] = report.notes;
  return doc;
}

std::string emit(const ordered_json& doc) { return doc.dump(2) + "\n"; }

}  // namespace ratsys
