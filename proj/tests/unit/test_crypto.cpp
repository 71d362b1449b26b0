#include <cstring>
#include <string>

#include "doctest.h"
#include "manetsim/crypto/sha256.hpp"
#include "manetsim/crypto/tea.hpp"
#include "manetsim/error.hpp"
#include "manetsim/sim/random.hpp"
#include "oracles.hpp"

using namespace manet;
using namespace manet::crypto;
using manet::sim::RandomStream;

TEST_SUITE_BEGIN("crypto");

namespace {

Bytes from_string(const std::string& s) {
  return Bytes(s.begin(), s.end());
}

std::string hex(const Digest256& d) {
  static const char* k = "0123456789abcdef";
  std::string out;
  for (std::uint8_t b : d) {
    out.push_back(k[b >> 4]);
    out.push_back(k[b & 0xF]);
  }
  return out;
}

}  // namespace

TEST_CASE("block cipher matches the straight-line reference") {
  RandomStream rng(2024);
  for (int i = 0; i < 200; ++i) {
    const TeaKey key{static_cast<std::uint32_t>(rng.next_u64()),
                     static_cast<std::uint32_t>(rng.next_u64()),
                     static_cast<std::uint32_t>(rng.next_u64()),
                     static_cast<std::uint32_t>(rng.next_u64())};
    const Block64 pt{static_cast<std::uint32_t>(rng.next_u64()),
                     static_cast<std::uint32_t>(rng.next_u64())};
    const Block64 ct = tea_encrypt(pt, key);
    const oracle::TeaState want =
        oracle::tea_encrypt({pt.v0, pt.v1}, key.k0, key.k1, key.k2, key.k3);
    CHECK(ct.v0 == want.v0);
    CHECK(ct.v1 == want.v1);

    const oracle::TeaState back =
        oracle::tea_decrypt({ct.v0, ct.v1}, key.k0, key.k1, key.k2, key.k3);
    CHECK(back.v0 == pt.v0);
    CHECK(back.v1 == pt.v1);
    CHECK(tea_decrypt(ct, key) == pt);
  }
}

TEST_CASE("block byte mapping is big-endian") {
  const std::uint8_t bytes[8] = {0x01, 0x02, 0x03, 0x04, 0xAA, 0xBB, 0xCC, 0xDD};
  const Block64 b = block_from_bytes(bytes);
  CHECK(b.v0 == 0x01020304u);
  CHECK(b.v1 == 0xAABBCCDDu);
  std::uint8_t out[8];
  block_to_bytes(b, out);
  CHECK(std::memcmp(bytes, out, 8) == 0);

  const std::uint8_t kb[16] = {0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 3, 0, 0, 0, 4};
  const TeaKey k = key_from_bytes(kb);
  CHECK(k.k0 == 1);
  CHECK(k.k1 == 2);
  CHECK(k.k2 == 3);
  CHECK(k.k3 == 4);
}

TEST_CASE("payload encryption round-trips across sizes") {
  const TeaKey key{0xDEADBEEF, 0x01234567, 0x89ABCDEF, 0x0F1E2D3C};
  RandomStream rng(5);
  for (const std::size_t len :
       {std::size_t{0}, std::size_t{1}, std::size_t{7}, std::size_t{8},
        std::size_t{9}, std::size_t{63}, std::size_t{64}, std::size_t{512},
        std::size_t{1000}}) {
    Bytes payload(len);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_u64());
    const Bytes wire = encrypt_payload(payload, key, 1000 + len);
    // BE64 counter prefix, padded ciphertext, BE32 length trailer.
    const std::size_t padded = ((len + 1 + 7) / 8) * 8;
    CHECK(wire.size() == 8 + padded + 4);
    CHECK(decrypt_payload(wire, key) == payload);
  }
}

TEST_CASE("payload decryption rejects damage") {
  const TeaKey key{1, 2, 3, 4};
  const Bytes payload = from_string("attack at dawn");
  const Bytes wire = encrypt_payload(payload, key, 7);

  Bytes truncated(wire.begin(), wire.end() - 1);
  CHECK_THROWS_AS(decrypt_payload(truncated, key), SimError);

  Bytes tiny(wire.begin(), wire.begin() + 4);
  CHECK_THROWS_AS(decrypt_payload(tiny, key), SimError);

  // Corrupting the stored length breaks the trailer check.
  Bytes bad_len = wire;
  bad_len[bad_len.size() - 1] ^= 0xFF;
  CHECK_THROWS_AS(decrypt_payload(bad_len, key), SimError);

  // A different key yields garbage that fails padding or length checks
  // in virtually all cases; this particular corruption is deterministic.
  Bytes wrong_ctr = wire;
  wrong_ctr[7] ^= 0x01;
  CHECK_THROWS_AS(decrypt_payload(wrong_ctr, key), SimError);
}

TEST_CASE("digest matches published vectors") {
  CHECK(hex(sha256(from_string(""))) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(hex(sha256(from_string("abc"))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(hex(sha256(from_string(
            "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // One input crossing several block boundaries.
  CHECK(hex(sha256(Bytes(129, 0x61))) ==
        "c12cb024a2e5551cca0e08fce8f1c5e314555cc3fef6329ee994a3db752166ae");
}

TEST_CASE("incremental digest equals one-shot") {
  const Bytes data = from_string("the quick brown fox jumps over the lazy dog");
  Sha256 h;
  h.update(data.data(), 10);
  h.update(data.data() + 10, 7);
  h.update(data.data() + 17, data.size() - 17);
  CHECK(h.finish() == sha256(data));
}

TEST_SUITE_END();
