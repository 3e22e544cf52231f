#include "lps/cache.hpp"

#include <charconv>
#include <fstream>

namespace lps {

ResultCache::ResultCache(std::filesystem::path path, std::string version)
    : path_(std::move(path)), version_(std::move(version)) {}

std::optional<CacheRecord> parse_cache_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  if (fields.size() != 4) return std::nullopt;

  CacheRecord r;
  const auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), r.n);
  if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size() || r.n == 0) return std::nullopt;
  if (fields[1].empty() || fields[1].find_first_not_of("0123456789") != std::string_view::npos) return std::nullopt;
  r.count = BigInt(std::string(fields[1]));
  if (fields[2].empty() || fields[3].empty()) return std::nullopt;
  r.method = fields[2];
  r.version = fields[3];
  return r;
}

std::string format_cache_line(const CacheRecord& r) {
  return std::to_string(r.n) + '\t' + r.count.str() + '\t' + r.method + '\t' + r.version;
}

std::vector<CacheRecord> ResultCache::records() const {
  std::vector<CacheRecord> out;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line))
    if (auto r = parse_cache_line(line)) out.push_back(std::move(*r));
  return out;
}

std::optional<BigInt> ResultCache::lookup(Value n) const {
  std::optional<BigInt> found;
  for (CacheRecord& r : records())
    if (r.n == n && r.version == version_) found = std::move(r.count);
  return found;
}

void ResultCache::require_writable() const {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw CacheError("cannot write cache file " + path_.string());
}

void ResultCache::append(Value n, const BigInt& count, std::string_view method) const {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw CacheError("cannot write cache file " + path_.string());
  out << format_cache_line({n, count, std::string(method), version_}) << '\n';
  if (!out) throw CacheError("write to cache file " + path_.string() + " failed");
}

}  // namespace lps
