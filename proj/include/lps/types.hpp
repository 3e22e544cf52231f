#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lps {

// Elements of the ground set {1, ..., 2n}.
using Value = std::uint64_t;

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr const char* kVersion = LPS_VERSION;

// Raised when a result contradicts something that holds for every valid
// input (e.g. a chain left with no admissible element).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline std::string to_decimal(const BigInt& v) { return v.str(); }

}  // namespace lps
