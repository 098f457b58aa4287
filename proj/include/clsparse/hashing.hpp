#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace clsparse {

/// 64-bit FNV-1a over raw bytes; numbers are hashed by bit pattern.
class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) noexcept {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ull;
    }
  }
  void text(std::string_view s) noexcept {
    count(s.size());
    bytes(s.data(), s.size());
  }
  void number(double x) noexcept {
    const auto bits = std::bit_cast<std::uint64_t>(x);
    bytes(&bits, sizeof bits);
  }
  void number(std::complex<double> z) noexcept {
    number(z.real());
    number(z.imag());
  }
  void count(std::uint64_t n) noexcept { bytes(&n, sizeof n); }

  std::uint64_t value() const noexcept { return hash_; }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

}  // namespace clsparse
