#include "ratsys/numeric.hpp"

#include <cctype>

#include "ratsys/errors.hpp"

namespace ratsys {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rat rat_from_string(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  std::string num = s;
  std::string den = "1";
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
  }
  if (!all_digits(num) || !all_digits(den)) {
    throw error("malformed rational literal: '" + text + "'");
  }
  mpz_class n(num, 10);
  mpz_class d(den, 10);
  if (d == 0) throw error("rational literal with zero denominator: '" + text + "'");
  Rat value(n, d);
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

std::string rat_to_string(const Rat& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

Rat rat_pow(const Rat& base, unsigned long exponent) {
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), exponent);
  mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), exponent);
  Rat out(num, den);
  out.canonicalize();
  return out;
}

}  // namespace ratsys
