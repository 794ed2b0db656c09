#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ratsys {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Expression / document syntax problems. position is a 0-based byte offset
// into the offending text.
class parse_error : public error {
 public:
  parse_error(const std::string& msg, std::size_t position)
      : error(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Raised when a Groebner computation exceeds its resource budget. Carries
// what was spent so callers can report it.
class budget_error : public error {
 public:
  budget_error(const std::string& msg, long pairs_used, int degree_reached)
      : error(msg), pairs_used_(pairs_used), degree_reached_(degree_reached) {}
  long pairs_used() const { return pairs_used_; }
  int degree_reached() const { return degree_reached_; }

 private:
  long pairs_used_;
  int degree_reached_;
};

}  // namespace ratsys
