#include "lps/families.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

namespace lps {

namespace {

std::vector<FreePair> replacement_range(const GroundSet& gs) {
  const Value n = gs.n();
  std::vector<FreePair> out;
  for (Value q = 2 * n / 3 + 1; q <= n; ++q)
    if (3 * q > 2 * n) out.push_back({q, 2 * q});
  return out;
}

std::vector<Quadruple> quadruples_of(const GroundSet& gs) {
  const Value n = gs.n();
  std::vector<Quadruple> out;
  for (Value q = n / 2 + 1; 3 * q <= 2 * n; ++q)
    if ((q & 1) == 0 && 2 * q > n) out.push_back({q, 3 * q / 2, 2 * q, 3 * q});
  return out;
}

BigInt power(unsigned base, std::size_t exp) {
  BigInt r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

std::vector<Value> base_lps(const GroundSet& gs) {
  std::vector<Value> out;
  out.reserve(gs.n());
  for (Value x = gs.n() + 1; x <= gs.size(); ++x) out.push_back(x);
  return out;
}

const char* to_string(FamilyKind k) noexcept {
  return k == FamilyKind::simple ? "simple" : "quadruple";
}

FamilySpec simple_family(const GroundSet& gs) {
  FamilySpec f{gs, FamilyKind::simple, 0, replacement_range(gs), {}};
  f.count = power(2, f.free_pairs.size());
  return f;
}

FamilySpec quadruple_family(const GroundSet& gs) {
  FamilySpec f{gs, FamilyKind::quadruple, 0, {}, quadruples_of(gs)};
  // A pair (q', 2q') already used as (3q/2, 3q) by a quadruple is dropped:
  // q' divisible by 3 with 2q'/3 an even member of (n/2, 2n/3].
  const Value n = gs.n();
  for (const FreePair& p : replacement_range(gs)) {
    bool used = false;
    if (p.q % 3 == 0) {
      const Value q = 2 * p.q / 3;
      used = (q & 1) == 0 && 2 * q > n && 3 * q <= 2 * n;
    }
    if (!used) f.free_pairs.push_back(p);
  }
  f.count = power(3, f.quadruples.size()) * power(2, f.free_pairs.size());
  return f;
}

BigInt simple_family_count(const GroundSet& gs) {
  const Value n = gs.n();
  return power(2, n - 2 * n / 3);
}

BigInt quadruple_family_count(const GroundSet& gs) {
  const Value n = gs.n();
  std::size_t a = 0;
  std::size_t discarded = 0;
  for (Value q = 1; q <= n; ++q) {
    if ((q & 1) == 0 && 2 * q > n && 3 * q <= 2 * n) {
      ++a;
      const Value partner = 3 * q / 2;
      if (3 * partner > 2 * n && partner <= n) ++discarded;
    }
  }
  const std::size_t b = (n - 2 * n / 3) - discarded;
  return power(3, a) * power(2, b);
}

std::vector<Value> member_from_digits(const FamilySpec& f, const std::vector<std::uint8_t>& digits) {
  const std::size_t nq = f.quadruples.size();
  if (digits.size() != nq + f.free_pairs.size())
    throw std::invalid_argument("member_from_digits: wrong number of choice digits");
  const GroundSet& gs = f.ground;
  std::vector<bool> in(gs.size() + 1, false);
  for (Value x = gs.n() + 1; x <= gs.size(); ++x) in[x] = true;

  for (std::size_t i = 0; i < nq; ++i) {
    const Quadruple& t = f.quadruples[i];
    switch (digits[i]) {
      case 0:
        break;
      case 1:  // (q, 3q/2)
        in[t.twice] = in[t.thrice] = false;
        in[t.q] = in[t.three_halves] = true;
        break;
      case 2:  // (2q, 3q/2)
        in[t.thrice] = false;
        in[t.three_halves] = true;
        break;
      default:
        throw std::invalid_argument("member_from_digits: quadruple digit out of range");
    }
  }
  for (std::size_t i = 0; i < f.free_pairs.size(); ++i) {
    const std::uint8_t d = digits[nq + i];
    if (d > 1) throw std::invalid_argument("member_from_digits: pair digit out of range");
    if (d == 1) {
      in[f.free_pairs[i].twice] = false;
      in[f.free_pairs[i].q] = true;
    }
  }
  std::vector<Value> out;
  out.reserve(gs.n());
  for (Value x = 1; x <= gs.size(); ++x)
    if (in[x]) out.push_back(x);
  return out;
}

MemberStream::MemberStream(const FamilySpec& f)
    : family_(&f), digits_(f.quadruples.size() + f.free_pairs.size(), 0) {}

bool MemberStream::next(std::vector<Value>& out) {
  if (done_) return false;
  out = member_from_digits(*family_, digits_);
  const std::size_t nq = family_->quadruples.size();
  std::size_t i = 0;
  for (; i < digits_.size(); ++i) {
    const std::uint8_t radix = i < nq ? 3 : 2;
    if (++digits_[i] < radix) break;
    digits_[i] = 0;
  }
  if (i == digits_.size()) done_ = true;
  return true;
}

FamilyValidation verify_family(const FamilySpec& f, const std::optional<BigInt>& exact,
                               std::size_t samples, std::uint64_t seed) {
  const GroundSet& gs = f.ground;
  FamilyValidation v;
  v.expected = f.count;
  v.exact = exact;
  v.exhaustive = gs.n() <= kExhaustiveFamilyLimit;

  auto check = [&](const std::vector<Value>& m) {
    if (m.size() != gs.n()) {
      v.violation = FamilyViolation{m, "member has " + std::to_string(m.size()) + " elements", std::nullopt};
      return false;
    }
    if (auto p = find_divisor_pair(gs, m)) {
      v.violation = FamilyViolation{m, "member is not primitive", p};
      return false;
    }
    return true;
  };

  if (v.exhaustive) {
    std::unordered_set<std::uint64_t> seen;
    MemberStream stream(f);
    std::vector<Value> m;
    while (stream.next(m)) {
      ++v.generated;
      if (!check(m)) {
        v.valid = false;
        break;
      }
      std::uint64_t mask = 0;
      for (Value x : m) mask |= std::uint64_t{1} << (x - 1);
      if (!seen.insert(mask).second) {
        v.distinct = false;
        v.valid = false;
        v.violation = FamilyViolation{m, "member generated twice", std::nullopt};
        break;
      }
    }
    if (v.valid && v.generated != f.count) v.valid = false;
  } else {
    std::mt19937_64 rng(seed);
    const std::size_t nq = f.quadruples.size();
    std::vector<std::uint8_t> digits(nq + f.free_pairs.size());
    for (std::size_t s = 0; s < samples; ++s) {
      for (std::size_t i = 0; i < digits.size(); ++i)
        digits[i] = static_cast<std::uint8_t>(rng() % (i < nq ? 3 : 2));
      ++v.generated;
      if (!check(member_from_digits(f, digits))) {
        v.valid = false;
        break;
      }
    }
  }
  if (exact && f.count > *exact) v.valid = false;
  return v;
}

}  // namespace lps
