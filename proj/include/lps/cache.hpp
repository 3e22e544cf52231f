#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lps/types.hpp"

namespace lps {

// One line of the cache file: n <TAB> count <TAB> method <TAB> version.
struct CacheRecord {
  Value n = 0;
  BigInt count;
  std::string method;
  std::string version;
};

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Append-only plain-text store of computed D(n). Records written by another
// version are kept in the file but ignored by lookup.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path path, std::string version = kVersion);

  const std::filesystem::path& path() const noexcept { return path_; }

  // Well-formed records in file order; malformed lines are skipped.
  std::vector<CacheRecord> records() const;

  // Latest record for n from this version.
  std::optional<BigInt> lookup(Value n) const;

  // Throws CacheError if the file cannot be opened for appending.
  void append(Value n, const BigInt& count, std::string_view method) const;

  // Throws CacheError unless the file can be created or appended to.
  void require_writable() const;

 private:
  std::filesystem::path path_;
  std::string version_;
};

std::optional<CacheRecord> parse_cache_line(std::string_view line);
std::string format_cache_line(const CacheRecord& r);

}  // namespace lps
