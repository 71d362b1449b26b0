#include "manetsim/crypto/tea.hpp"

#include <string>

#include "manetsim/error.hpp"

namespace manet::crypto {
namespace {

constexpr std::uint32_t kDelta = 0x9E3779B9u;
constexpr int kCycles = 32;

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

void put_be32(std::uint32_t v, std::uint8_t* p) {
  p[0] = static_cast<std::uint8_t>(v >> 24);
  p[1] = static_cast<std::uint8_t>(v >> 16);
  p[2] = static_cast<std::uint8_t>(v >> 8);
  p[3] = static_cast<std::uint8_t>(v);
}

}  // namespace

Block64 tea_encrypt(Block64 block, const TeaKey& key) {
  std::uint32_t v0 = block.v0, v1 = block.v1, sum = 0;
  for (int i = 0; i < kCycles; ++i) {
    sum += kDelta;
    v0 += ((v1 << 4) + key.k0) ^ (v1 + sum) ^ ((v1 >> 5) + key.k1);
    v1 += ((v0 << 4) + key.k2) ^ (v0 + sum) ^ ((v0 >> 5) + key.k3);
  }
  return Block64{v0, v1};
}

Block64 tea_decrypt(Block64 block, const TeaKey& key) {
  std::uint32_t v0 = block.v0, v1 = block.v1;
  std::uint32_t sum = kDelta * static_cast<std::uint32_t>(kCycles);  // 0xC6EF3720
  for (int i = 0; i < kCycles; ++i) {
    v1 -= ((v0 << 4) + key.k2) ^ (v0 + sum) ^ ((v0 >> 5) + key.k3);
    v0 -= ((v1 << 4) + key.k0) ^ (v1 + sum) ^ ((v1 >> 5) + key.k1);
    sum -= kDelta;
  }
  return Block64{v0, v1};
}

Block64 block_from_bytes(const std::uint8_t bytes[8]) {
  return Block64{be32(bytes), be32(bytes + 4)};
}

void block_to_bytes(Block64 block, std::uint8_t out[8]) {
  put_be32(block.v0, out);
  put_be32(block.v1, out + 4);
}

TeaKey key_from_bytes(const std::uint8_t bytes[16]) {
  return TeaKey{be32(bytes), be32(bytes + 4), be32(bytes + 8), be32(bytes + 12)};
}

Bytes encrypt_payload(const Bytes& payload, const TeaKey& key,
                      std::uint64_t counter_base) {
  Bytes padded = payload;
  padded.push_back(0x80);
  while (padded.size() % 8 != 0) padded.push_back(0x00);

  Bytes out(8 + padded.size() + 4);
  for (int i = 0; i < 8; ++i)
    out[i] = static_cast<std::uint8_t>(counter_base >> (56 - 8 * i));

  for (std::size_t b = 0; b < padded.size() / 8; ++b) {
    const std::uint64_t ctr = counter_base + b;
    Block64 ks = tea_encrypt(
        Block64{static_cast<std::uint32_t>(ctr >> 32), static_cast<std::uint32_t>(ctr)},
        key);
    std::uint8_t ksb[8];
    block_to_bytes(ks, ksb);
    for (int i = 0; i < 8; ++i) out[8 + b * 8 + i] = padded[b * 8 + i] ^ ksb[i];
  }

  const auto len = static_cast<std::uint32_t>(payload.size());
  put_be32(len, out.data() + out.size() - 4);
  return out;
}

Bytes decrypt_payload(const Bytes& wire, const TeaKey& key) {
  if (wire.size() < 8 + 8 + 4 || (wire.size() - 12) % 8 != 0)
    throw SimError("ciphertext length " + std::to_string(wire.size()) + " malformed");

  std::uint64_t counter_base = 0;
  for (int i = 0; i < 8; ++i) counter_base = (counter_base << 8) | wire[i];

  const std::size_t blocks = (wire.size() - 12) / 8;
  Bytes padded(blocks * 8);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::uint64_t ctr = counter_base + b;
    Block64 ks = tea_encrypt(
        Block64{static_cast<std::uint32_t>(ctr >> 32), static_cast<std::uint32_t>(ctr)},
        key);
    std::uint8_t ksb[8];
    block_to_bytes(ks, ksb);
    for (int i = 0; i < 8; ++i) padded[b * 8 + i] = wire[8 + b * 8 + i] ^ ksb[i];
  }

  const std::uint32_t len = be32(wire.data() + wire.size() - 4);
  if (len >= padded.size() || padded[len] != 0x80)
    throw SimError("ciphertext padding invalid");
  for (std::size_t i = len + 1; i < padded.size(); ++i)
    if (padded[i] != 0x00) throw SimError("ciphertext padding invalid");

  padded.resize(len);
  return padded;
}

}  // namespace manet::crypto
