#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cantisim/errors.hpp"

namespace cantisim {

// Locale-independent %.12g formatting so reruns are byte identical.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw ConfigError("cannot open for writing: " + path);
    for (size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    if (values.size() != columns_)
      throw ConfigError("csv row width does not match header");
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_number(values[i]);
    }
    out_ << '\n';
  }

  // mixed row: leading text cell then numbers
  void row(const std::string& first, const std::vector<double>& values) {
    if (values.size() + 1 != columns_)
      throw ConfigError("csv row width does not match header");
    out_ << first;
    for (double v : values) out_ << ',' << format_number(v);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
  size_t columns_;
};

inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
  CsvWriter w(path, header);
  for (const auto& r : rows) w.row(r);
}

// FNV-1a 64-bit, used to fingerprint the effective configuration text.
inline uint64_t fnv1a64(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace cantisim
