#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lps/groundset.hpp"

namespace lps {

// {n+1, ..., 2n}
std::vector<Value> base_lps(const GroundSet& gs);

enum class FamilyKind : std::uint8_t { simple, quadruple };

const char* to_string(FamilyKind k) noexcept;

// (q, 3q/2, 2q, 3q) for an even q in (n/2, 2n/3]. Each quadruple replaces
// the base pair (2q, 3q) by one of (2q, 3q), (q, 3q/2), (2q, 3q/2).
struct Quadruple {
  Value q = 0;
  Value three_halves = 0;
  Value twice = 0;
  Value thrice = 0;
};

// Optional replacement of 2q by q in the base set.
struct FreePair {
  Value q = 0;
  Value twice = 0;
};

// A lower-bound family of LPS, described by its independent choices.
struct FamilySpec {
  GroundSet ground;
  FamilyKind kind = FamilyKind::simple;
  BigInt count;
  std::vector<FreePair> free_pairs;
  std::vector<Quadruple> quadruples;
};

// Free pairs: every q with 3q > 2n and q <= n. count = 2^|free pairs|.
FamilySpec simple_family(const GroundSet& gs);

// Quadruples: every even q with 2q > n and 3q <= 2n. Free pairs: as in the
// simple family, minus q' = 3q/2 for each quadruple q.
// count = 3^|quadruples| * 2^|free pairs|.
FamilySpec quadruple_family(const GroundSet& gs);

// Closed forms, computed without building the family.
BigInt simple_family_count(const GroundSet& gs);
BigInt quadruple_family_count(const GroundSet& gs);

// Streams the members of a family in mixed-radix order: quadruple digits
// (base 3) first, then free-pair digits (base 2). Digit 0 is the base
// choice everywhere, so the first member is base_lps.
class MemberStream {
 public:
  explicit MemberStream(const FamilySpec& f);

  // Writes the next member (sorted) into `out`; false once exhausted.
  bool next(std::vector<Value>& out);

 private:
  const FamilySpec* family_;
  std::vector<std::uint8_t> digits_;
  bool done_ = false;
};

// Builds the member selected by explicit choice digits (size
// quadruples + free_pairs, quadruple digits < 3, pair digits < 2).
std::vector<Value> member_from_digits(const FamilySpec& f, const std::vector<std::uint8_t>& digits);

struct FamilyViolation {
  std::vector<Value> member;
  std::string problem;
  std::optional<std::pair<Value, Value>> divisor_pair;
};

struct FamilyValidation {
  bool exhaustive = false;
  bool valid = true;
  BigInt generated;  // members checked
  BigInt expected;   // f.count
  bool distinct = true;
  std::optional<BigInt> exact;  // D(n), when supplied
  std::optional<FamilyViolation> violation;
};

// Largest n checked by full generation; above it members are sampled.
inline constexpr Value kExhaustiveFamilyLimit = 16;

// Checks every member is an LPS, members are distinct and their number is
// f.count; with `exact`, also that f.count <= exact. Above
// kExhaustiveFamilyLimit only `samples` random members are checked.
FamilyValidation verify_family(const FamilySpec& f, const std::optional<BigInt>& exact = std::nullopt,
                               std::size_t samples = 256, std::uint64_t seed = 1);

}  // namespace lps
