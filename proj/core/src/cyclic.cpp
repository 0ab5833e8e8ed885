#include "aplab/cyclic.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace aplab {

double CyclicFunction::mean() const {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double CyclicFunction::min() const {
  if (values.empty()) throw std::logic_error("CyclicFunction::min on empty function");
  return *std::min_element(values.begin(), values.end());
}

double CyclicFunction::max() const {
  if (values.empty()) throw std::logic_error("CyclicFunction::max on empty function");
  return *std::max_element(values.begin(), values.end());
}

void CyclicFunction::save_csv(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_csv: cannot open " + path);
  std::fputs("index,value\r\n", f);
  for (std::size_t i = 0; i < values.size(); ++i)
    std::fprintf(f, "%zu,%.17g\r\n", i, values[i]);
  std::fclose(f);
}

CyclicFunction CyclicFunction::load_csv(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("load_csv: cannot open " + path);
  CyclicFunction out;
  char line[256];
  bool header = true;
  while (std::fgets(line, sizeof line, f)) {
    if (header) {
      header = false;
      if (std::strncmp(line, "index,value", 11) != 0) {
        std::fclose(f);
        throw std::runtime_error("load_csv: missing index,value header in " + path);
      }
      continue;
    }
    std::size_t idx;
    double v;
    if (std::sscanf(line, "%zu,%lg", &idx, &v) != 2) continue;
    if (idx != out.values.size()) {
      std::fclose(f);
      throw std::runtime_error("load_csv: non-contiguous indices in " + path);
    }
    out.values.push_back(v);
  }
  std::fclose(f);
  out.modulus = static_cast<std::int64_t>(out.values.size());
  if (out.modulus == 0) throw std::runtime_error("load_csv: empty function in " + path);
  return out;
}

void CyclicFunction::save_binary(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("save_binary: cannot open " + path);
  std::uint64_t n = static_cast<std::uint64_t>(modulus);
  bool ok = std::fwrite(&n, 8, 1, f) == 1 &&
            (values.empty() || std::fwrite(values.data(), 8, values.size(), f) == values.size());
  std::fclose(f);
  if (!ok) throw std::runtime_error("save_binary: short write to " + path);
}

CyclicFunction CyclicFunction::load_binary(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("load_binary: cannot open " + path);
  std::uint64_t n = 0;
  if (std::fread(&n, 8, 1, f) != 1) {
    std::fclose(f);
    throw std::runtime_error("load_binary: truncated header in " + path);
  }
  CyclicFunction out;
  out.modulus = static_cast<std::int64_t>(n);
  out.values.resize(n);
  if (n && std::fread(out.values.data(), 8, n, f) != n) {
    std::fclose(f);
    throw std::runtime_error("load_binary: truncated payload in " + path);
  }
  std::fclose(f);
  return out;
}

}  // namespace aplab
