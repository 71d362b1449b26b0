#pragma once

#include <array>
#include <cstdint>

#include "manetsim/types.hpp"

namespace manet::crypto {

/// 128-bit TEA key as four 32-bit words.
struct TeaKey {
  std::uint32_t k0 = 0, k1 = 0, k2 = 0, k3 = 0;
};

/// One 64-bit block as two 32-bit halves.
struct Block64 {
  std::uint32_t v0 = 0, v1 = 0;
  bool operator==(const Block64&) const = default;
};

/// Tiny Encryption Algorithm (Wheeler and Needham), 32 cycles, delta
/// 0x9E3779B9. Each cycle updates both halves; decryption runs the cycle
/// schedule in reverse starting from sum = delta * 32 = 0xC6EF3720.
Block64 tea_encrypt(Block64 block, const TeaKey& key);
Block64 tea_decrypt(Block64 block, const TeaKey& key);

/// Byte mapping for blocks and keys is big-endian word order.
Block64 block_from_bytes(const std::uint8_t bytes[8]);
void block_to_bytes(Block64 block, std::uint8_t out[8]);
TeaKey key_from_bytes(const std::uint8_t bytes[16]);

/// Counter-mode payload encryption.
///
/// Layout: BE64(counter_base) || ciphertext || BE32(payload_len).
/// The plaintext is padded with a single 0x80 then zeros up to an 8-byte
/// boundary; keystream block i is tea_encrypt(BE64(counter_base + i)).
/// Callers own counter_base uniqueness per key.
Bytes encrypt_payload(const Bytes& payload, const TeaKey& key,
                      std::uint64_t counter_base);

/// Inverse of encrypt_payload. Throws SimError when the buffer is too
/// short, not block-aligned, or the padding/length trailer is invalid.
Bytes decrypt_payload(const Bytes& wire, const TeaKey& key);

}  // namespace manet::crypto
