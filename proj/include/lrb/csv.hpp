#pragma once
#include <cstdint>
#include <cstdio>
#include <string>

#include "lrb/errors.hpp"

namespace lrb {

// All floats in CSV output go through here: 17 significant digits, C locale,
// so round-tripping and byte-level determinism hold.
inline std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string fmt_ll(long long x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld", x);
  return buf;
}

// Minimal line-buffered CSV writer; fails loudly on I/O errors.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : path_(path), f_(std::fopen(path.c_str(), "wb")) {
    if (!f_) throw IoError("cannot open for writing: " + path);
  }
  ~CsvWriter() {
    if (f_) std::fclose(f_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void line(const std::string& s) {
    if (std::fputs(s.c_str(), f_) == EOF || std::fputc('\n', f_) == EOF)
      throw IoError("write failed: " + path_);
  }
  void close() {
    if (f_ && std::fclose(f_) != 0) {
      f_ = nullptr;
      throw IoError("close failed: " + path_);
    }
    f_ = nullptr;
  }

 private:
  std::string path_;
  std::FILE* f_;
};

}  // namespace lrb
