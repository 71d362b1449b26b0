#include <memory>

#include "doctest.h"
#include "manetsim/crypto/multisig.hpp"
#include "manetsim/crypto/signature.hpp"
#include "manetsim/error.hpp"
#include "manetsim/sim/random.hpp"

using namespace manet;
using namespace manet::crypto;
using manet::sim::RandomStream;

TEST_SUITE_BEGIN("multisig");

namespace {

struct Fixture {
  KeyAuthority auth{std::make_unique<KeyedDigestScheme>()};
  Bytes canonical;

  Fixture() {
    RandomStream rng(7);
    for (NodeId n = 0; n < 5; ++n) auth.provision(n, rng);
    auth.freeze();
    for (int i = 0; i < 48; ++i) canonical.push_back(static_cast<std::uint8_t>(i * 7));
  }

  MultiSig chain_of(std::initializer_list<NodeId> signers) const {
    MultiSig c;
    for (NodeId n : signers)
      c = chain_append(std::move(c), n, auth.private_key(n), canonical, auth.scheme());
    return c;
  }

  ChainVerdict verify(const MultiSig& c) const {
    return chain_verify(c, auth.directory(), canonical, auth.scheme());
  }
};

}  // namespace

TEST_CASE("chains of increasing length verify") {
  Fixture f;
  CHECK(f.verify(MultiSig{}).valid);  // empty chain: vacuously valid
  CHECK(f.verify(f.chain_of({0})).valid);
  CHECK(f.verify(f.chain_of({0, 1})).valid);
  CHECK(f.verify(f.chain_of({0, 1, 2, 3, 4})).valid);
}

TEST_CASE("duplicate signer throws on append and fails verification if forced") {
  Fixture f;
  MultiSig c = f.chain_of({0, 1});
  CHECK_THROWS_AS(
      chain_append(c, 1, f.auth.private_key(1), f.canonical, f.auth.scheme()),
      DuplicateSigner);

  // Forged duplicate: copy the first entry to the tail.
  MultiSig forged = c;
  forged.entries.push_back(forged.entries.front());
  const ChainVerdict v = f.verify(forged);
  CHECK_FALSE(v.valid);
  CHECK(v.at_index == 2);
}

TEST_CASE("dropped entries break the chain") {
  Fixture f;
  const MultiSig full = f.chain_of({0, 1, 2});

  MultiSig no_tail = full;
  no_tail.entries.pop_back();  // prefix of a valid chain is itself valid
  CHECK(f.verify(no_tail).valid);

  MultiSig no_mid = full;
  no_mid.entries.erase(no_mid.entries.begin() + 1);
  const ChainVerdict v = f.verify(no_mid);
  CHECK_FALSE(v.valid);
  CHECK(v.at_index == 1);  // entry 2's signature commits to [0,1,2], not [0,2]

  MultiSig no_head = full;
  no_head.entries.erase(no_head.entries.begin());
  CHECK_FALSE(f.verify(no_head).valid);
}

TEST_CASE("reordered entries break the chain") {
  Fixture f;
  MultiSig c = f.chain_of({0, 1, 2});
  std::swap(c.entries[0], c.entries[1]);
  const ChainVerdict v = f.verify(c);
  CHECK_FALSE(v.valid);
  CHECK(v.at_index == 0);
}

TEST_CASE("a chain cannot be spliced onto another packet") {
  Fixture f;
  const MultiSig c = f.chain_of({0, 1});
  Bytes other = f.canonical;
  other[3] ^= 0x01;
  const ChainVerdict v = chain_verify(c, f.auth.directory(), other, f.auth.scheme());
  CHECK_FALSE(v.valid);
  CHECK(v.at_index == 0);
}

TEST_CASE("tampered signature bytes are caught at their index") {
  Fixture f;
  MultiSig c = f.chain_of({0, 1, 2});
  c.entries[1].sig[4] ^= 0x10;
  const ChainVerdict v = f.verify(c);
  CHECK_FALSE(v.valid);
  CHECK(v.at_index == 1);
}

TEST_CASE("relabeled signer ids are caught") {
  Fixture f;
  MultiSig c = f.chain_of({0, 1});
  c.entries[1].signer = 3;  // 3 exists in the directory but did not sign
  CHECK_FALSE(f.verify(c).valid);

  MultiSig c2 = f.chain_of({0, 1});
  c2.entries[1].signer = 77;  // unknown to the directory entirely
  const ChainVerdict v2 = f.verify(c2);
  CHECK_FALSE(v2.valid);
  CHECK(v2.at_index == 1);
}

TEST_CASE("serialized layout is the documented big-endian framing") {
  Fixture f;
  const MultiSig c = f.chain_of({3, 1});
  const Bytes wire = chain_bytes(c);

  REQUIRE(wire.size() >= 2);
  const std::size_t count = (wire[0] << 8) | wire[1];
  REQUIRE(count == 2);

  std::size_t pos = 2;
  for (std::size_t i = 0; i < count; ++i) {
    REQUIRE(wire.size() >= pos + 6);
    const NodeId signer = (static_cast<NodeId>(wire[pos]) << 24) |
                          (static_cast<NodeId>(wire[pos + 1]) << 16) |
                          (static_cast<NodeId>(wire[pos + 2]) << 8) |
                          static_cast<NodeId>(wire[pos + 3]);
    const std::size_t siglen = (wire[pos + 4] << 8) | wire[pos + 5];
    CHECK(signer == c.entries[i].signer);
    CHECK(siglen == c.entries[i].sig.size());
    pos += 6 + siglen;
  }
  CHECK(pos == wire.size());
}

TEST_SUITE_END();
