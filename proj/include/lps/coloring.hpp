#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lps/groundset.hpp"

namespace lps {

// green: in every LPS. red: in no LPS. blue: undetermined.
enum class Color : std::uint8_t { blue, green, red };

const char* to_string(Color c) noexcept;

enum class Reason : std::uint8_t {
  none,               // blue
  sole_survivor,      // green: every other element of its chain is red
  divides_green,      // red: element divides the green witness
  multiple_of_green,  // red: the green witness divides the element
};

const char* to_string(Reason r) noexcept;

struct Justification {
  Reason reason = Reason::none;
  Value witness = 0;
};

// Total assignment [1, 2n] -> Color with a re-checkable justification for
// every non-blue element. Starts all blue.
class Coloring {
 public:
  explicit Coloring(GroundSet gs);

  const GroundSet& ground() const noexcept { return gs_; }
  Color color(Value x) const;
  const Justification& why(Value x) const;

  void paint(Value x, Color c, Justification j);

  std::vector<Value> members(Color c) const;
  std::size_t count(Color c) const;

  // Same color on every element; justifications are ignored.
  bool same_assignment(const Coloring& other) const noexcept;

 private:
  GroundSet gs_;
  std::vector<Color> colors_;
  std::vector<Justification> why_;
};

// Describes the first element whose justification does not hold, printing
// its whole chain. nullopt when every green/red element checks out and no
// chain is entirely red.
std::optional<std::string> check_justifications(const Coloring& c);

// Smallest odd multiple of odd q in [n+1, 2n]. Requires 3q <= 2n.
// Throws std::domain_error on a violated precondition and InternalError if
// no witness exists.
Value odd_multiple_witness(const GroundSet& gs, Value q);

// Twice-odd witness ranges for an odd q: I1 = [1, 2n/21], I2 = (n/10, 2n/15],
// I3 = (n/6, 2n/9].
bool has_twice_odd_witness(const GroundSet& gs, Value q) noexcept;

// Smallest element of [n+1, floor(4n/3)] of the form 2q * odd. Requires q
// odd and has_twice_odd_witness. Errors as odd_multiple_witness.
Value twice_odd_witness(const GroundSet& gs, Value q);

// Least fixed point of the forcing rules
//   R1: a chain whose other elements are all red has its last one green;
//   R2: anything dividing or divisible by a green element is red.
// Throws InternalError if the rules contradict (a chain turns all red or
// two related elements turn green).
Coloring propagate_coloring(const GroundSet& gs);

// Same fixed point, with pending rule applications drawn in an order
// shuffled by `schedule_seed`.
Coloring propagate_coloring(const GroundSet& gs, std::uint64_t schedule_seed);

// The closed-form interval classification:
//   green: odd x in [n+1, 2n]; x = 2 mod 4 in [n+1, 4n/3]
//   red:   odd x <= 2n/3; x = 2 mod 4 in [1, 4n/21], (n/5, 4n/15], (n/3, 4n/9]
//   blue:  everything else
Coloring interval_coloring(const GroundSet& gs);

// Every element blue.
Coloring uniform_blue(const GroundSet& gs);

// true iff fine's green and red sets contain coarse's.
bool refines(const Coloring& coarse, const Coloring& fine);

// interval_coloring(n) is refined by propagate_coloring(n).
bool coloring_refines(const GroundSet& gs);

// Bands of odd roots q, each an interval (lo*n, hi*n] with a fixed number of
// blue chain elements under interval_coloring. `dyadic` is
// (n/2^(k+1), n/2^k] for k >= 4 with k blue elements; `forced` is
// (n/2, 2n/3]; `singleton` is q > n.
enum class Band : std::uint8_t { none, singleton, forced, J1, J2, J3, J4, J5, J6, J7, J8, J9, dyadic };

std::string to_string(Band b, unsigned k = 0);

struct Fraction {
  Value num;
  Value den;
};

struct BandSpec {
  Band label;
  Fraction lo;  // exclusive
  Fraction hi;  // inclusive
  unsigned blue;
};

// J1..J9 with their blue counts, plus the zero-blue forced band.
inline constexpr std::array<BandSpec, 10> kBandTable{{
    {Band::forced, {1, 2}, {2, 3}, 0},
    {Band::J1, {2, 3}, {1, 1}, 2},
    {Band::J2, {1, 4}, {1, 2}, 2},
    {Band::J3, {2, 9}, {1, 4}, 3},
    {Band::J4, {1, 6}, {2, 9}, 2},
    {Band::J5, {2, 15}, {1, 6}, 3},
    {Band::J6, {1, 8}, {2, 15}, 2},
    {Band::J7, {1, 10}, {1, 8}, 3},
    {Band::J8, {2, 21}, {1, 10}, 4},
    {Band::J9, {1, 16}, {2, 21}, 3},
}};

// Dyadic bands start at this k; lower k is covered by kBandTable.
inline constexpr unsigned kFirstDyadicBand = 4;

struct JBand {
  Band label = Band::none;
  unsigned k = 0;  // dyadic only
  unsigned expected_blue = 0;
};

// Band of the odd root q, by integer inequalities on (q, n).
JBand j_band(const GroundSet& gs, Value q);

struct BlueCount {
  Value root = 0;
  unsigned blue = 0;
  JBand band;
};

// Per odd root: blue elements in its chain under c, with the root's band.
std::vector<BlueCount> blue_counts(const Coloring& c);

// Roots whose blue count under interval_coloring differs from the band's
// expected count. Empty when the band table describes n exactly.
std::vector<BlueCount> band_table_mismatches(const GroundSet& gs);

}  // namespace lps
