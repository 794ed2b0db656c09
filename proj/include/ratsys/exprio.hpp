#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ratsys/canform.hpp"
#include "ratsys/obsfield.hpp"
#include "ratsys/simulate.hpp"
#include "ratsys/sysmodel.hpp"

namespace ratsys {

using ordered_json = nlohmann::ordered_json;

// Expression grammar (integers and named variables over + - * / ^ and
// parentheses, ^ taking a nonnegative integer literal):
//   expr   := ('+'|'-')? term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := identifier | integer | '(' expr ')'
// "p/q" coefficient literals need no special case; they are ordinary
// term-level divisions. parse_error carries the byte offset of the problem.
RationalFunction parse_rational(const std::string& text,
                                const std::vector<std::string>& variables);

// parse_rational restricted to results with denominator 1.
Polynomial parse_polynomial(const std::string& text,
                            const std::vector<std::string>& variables);

// Graded-lex descending term order, explicit '*', '^' only above exponent 1,
// unit coefficients omitted on nonconstant monomials.
std::string render_polynomial(const Polynomial& p,
                              const std::vector<std::string>& variables);

// "(num)/(den)" unless the denominator is 1.
std::string render_rational(const RationalFunction& r,
                            const std::vector<std::string>& variables);

// System document schema:
//   variables        nonempty array of distinct identifiers
//   variety          optional array of polynomial expressions
//   parametrization  optional {"parameters": [...], "images": [...]}
//   f0, f1           arrays of n expressions
//   h                expression
//   x0               array of n rationals ("p/q" strings or integers)
//   input_values     array of rationals
//   assumptions      {"algebraically_controllable": bool, "no_algebraic_gap": bool}
// Shape problems throw error/parse_error; semantic checks are
// validate_system's job.
RationalSystem system_from_json(const ordered_json& doc);
RationalSystem load_system(const std::string& path);

ordered_json system_to_json(const RationalSystem& system);

ordered_json validation_to_json(const ValidationReport& report);
ordered_json observability_to_json(const ObservabilityReport& report,
                                   const std::vector<std::string>& variables);
ordered_json index_to_json(const IndexResult& result,
                           const std::vector<std::string>& variables);
ordered_json ocf_report_to_json(const OcfReport& report);
ordered_json map_to_json(const BirationalMap& map,
                         const std::vector<std::string>& source_variables,
                         const std::vector<std::string>& target_variables);
ordered_json canonicalization_to_json(const CanonicalizationResult& result,
                                      const std::vector<std::string>& source_variables);
ordered_json trajectory_to_json(const Trajectory& trajectory,
                                bool include_states = false);
ordered_json probe_to_json(const ProbeReport& report);

// dump(2) with a trailing newline; the one formatting used everywhere.
std::string emit(const ordered_json& doc);

}  // namespace ratsys
