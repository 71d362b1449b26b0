#include <memory>

#include "doctest.h"
#include "manetsim/crypto/sha256.hpp"
#include "manetsim/crypto/signature.hpp"
#include "manetsim/error.hpp"
#include "manetsim/sim/random.hpp"

using namespace manet;
using namespace manet::crypto;
using manet::sim::RandomStream;

TEST_SUITE_BEGIN("signature");

namespace {

Bytes msg(const char* s) {
  Bytes b;
  while (*s) b.push_back(static_cast<std::uint8_t>(*s++));
  return b;
}

}  // namespace

TEST_CASE("sign and verify round-trip") {
  KeyedDigestScheme scheme;
  RandomStream rng(1);
  const KeyPair kp = scheme.keygen(rng);
  CHECK(kp.private_key.size() == 32);
  CHECK(kp.public_key.size() == 32);

  const Bytes m = msg("route reply payload");
  const Signature sig = scheme.sign(kp.private_key, m);
  CHECK(scheme.verify(kp.public_key, m, sig));

  Bytes other = m;
  other[0] ^= 1;
  CHECK_FALSE(scheme.verify(kp.public_key, other, sig));

  Signature bad = sig;
  bad[5] ^= 0x80;
  CHECK_FALSE(scheme.verify(kp.public_key, m, bad));
}

TEST_CASE("keys derive as documented") {
  KeyedDigestScheme scheme;
  RandomStream rng(2);
  const KeyPair kp = scheme.keygen(rng);

  Bytes tagged;
  tagged.push_back(0x01);
  tagged.insert(tagged.end(), kp.private_key.begin(), kp.private_key.end());
  const Digest256 d = sha256(tagged);
  CHECK(Bytes(d.begin(), d.end()) == kp.public_key);

  const Bytes m = msg("hi");
  Bytes sigin;
  sigin.push_back(0x02);
  sigin.insert(sigin.end(), kp.private_key.begin(), kp.private_key.end());
  for (int i = 7; i >= 0; --i)
    sigin.push_back(static_cast<std::uint8_t>((m.size() >> (8 * i)) & 0xFF));
  sigin.insert(sigin.end(), m.begin(), m.end());
  const Digest256 sd = sha256(sigin);
  CHECK(Bytes(sd.begin(), sd.end()) == scheme.sign(kp.private_key, m));
}

TEST_CASE("unknown public keys never verify") {
  KeyedDigestScheme scheme;
  RandomStream rng(3);
  const KeyPair kp = scheme.keygen(rng);
  const Bytes m = msg("x");
  const Signature sig = scheme.sign(kp.private_key, m);

  PublicKey stranger(32, 0x42);
  CHECK_FALSE(scheme.verify(stranger, m, sig));

  // A fresh scheme instance has no key table; even the right public key
  // cannot verify against it.
  KeyedDigestScheme empty;
  CHECK_FALSE(empty.verify(kp.public_key, m, sig));
}

TEST_CASE("keys from different nodes do not cross-verify") {
  KeyedDigestScheme scheme;
  RandomStream rng(4);
  const KeyPair a = scheme.keygen(rng);
  const KeyPair b = scheme.keygen(rng);
  const Bytes m = msg("shared message");
  const Signature sig_a = scheme.sign(a.private_key, m);
  CHECK(scheme.verify(a.public_key, m, sig_a));
  CHECK_FALSE(scheme.verify(b.public_key, m, sig_a));
}

TEST_CASE("directory rejects duplicates and writes after freeze") {
  KeyDirectory dir;
  dir.add(1, PublicKey(32, 0xAA));
  dir.add(2, PublicKey(32, 0xBB));
  CHECK_THROWS_AS(dir.add(1, PublicKey(32, 0xCC)), DuplicateNode);
  CHECK(dir.size() == 2);

  REQUIRE(dir.find(1) != nullptr);
  CHECK((*dir.find(1))[0] == 0xAA);
  CHECK(dir.find(99) == nullptr);

  CHECK_FALSE(dir.frozen());
  dir.freeze();
  CHECK(dir.frozen());
  CHECK_THROWS_AS(dir.add(3, PublicKey(32, 0xDD)), SimError);
}

TEST_CASE("authority provisions nodes and guards private keys") {
  KeyAuthority auth(std::make_unique<KeyedDigestScheme>());
  RandomStream rng(5);
  auth.provision(0, rng);
  auth.provision(1, rng);
  CHECK_THROWS_AS(auth.provision(0, rng), DuplicateNode);
  auth.freeze();

  CHECK(auth.directory().size() == 2);
  const Bytes m = msg("beacon");
  const Signature sig = auth.scheme().sign(auth.private_key(0), m);
  REQUIRE(auth.directory().find(0) != nullptr);
  CHECK(auth.scheme().verify(*auth.directory().find(0), m, sig));
  CHECK_FALSE(auth.scheme().verify(*auth.directory().find(1), m, sig));
}

TEST_SUITE_END();
