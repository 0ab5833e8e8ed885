#pragma once

// Dense real-valued function on Z_N.  The serialization formats are part of
// the tool interface (docs/formats.md):
//   * CSV: header "index,value", one row per residue, %.17g values;
//   * binary: N as 8-byte little-endian unsigned, then N doubles.

#include <cstdint>
#include <string>
#include <vector>

namespace aplab {

struct CyclicFunction {
  std::int64_t modulus = 0;
  std::vector<double> values;

  CyclicFunction() = default;
  CyclicFunction(std::int64_t N, double fill = 0.0)
      : modulus(N), values(static_cast<std::size_t>(N), fill) {}

  // Value at any integer representative (reduced mod N).
  double at(std::int64_t x) const {
    std::int64_t r = x % modulus;
    if (r < 0) r += modulus;
    return values[static_cast<std::size_t>(r)];
  }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  double mean() const;
  double min() const;
  double max() const;

  void save_csv(const std::string& path) const;
  void save_binary(const std::string& path) const;
  static CyclicFunction load_csv(const std::string& path);
  static CyclicFunction load_binary(const std::string& path);
};

}  // namespace aplab
