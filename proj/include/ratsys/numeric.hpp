#pragma once

#include <gmpxx.h>

#include <string>

namespace ratsys {

// Exact rational scalar. mpq_class keeps values canonical (lowest terms,
// positive denominator) as long as every entry point canonicalizes, which
// rat_from_string does.
using Rat = mpq_class;

// Accepts "p", "-p", "p/q" with q > 0 after sign normalization. Throws
// ratsys::error on malformed text or zero denominator.
Rat rat_from_string(const std::string& text);

// "p" when the denominator is 1, "p/q" otherwise.
std::string rat_to_string(const Rat& value);

Rat rat_pow(const Rat& base, unsigned long exponent);

inline double rat_to_double(const Rat& value) { return value.get_d(); }

}  // namespace ratsys
