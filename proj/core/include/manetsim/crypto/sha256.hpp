#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "manetsim/types.hpp"

namespace manet::crypto {

using Digest256 = std::array<std::uint8_t, 32>;

/// FIPS 180-4 SHA-256. Self-contained so signed packets verify
/// byte-for-byte on every platform with no library dependency.
class Sha256 {
 public:
  Sha256();
  void update(const std::uint8_t* data, std::size_t len);
  void update(const Bytes& data) { update(data.data(), data.size()); }
  Digest256 finish();

 private:
  void compress(const std::uint8_t block[64]);

  std::array<std::uint32_t, 8> state_;
  std::uint64_t total_len_ = 0;
  std::uint8_t buf_[64];
  std::size_t buf_len_ = 0;
};

Digest256 sha256(const Bytes& data);

}  // namespace manet::crypto
