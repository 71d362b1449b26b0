#include "manetsim/crypto/signature.hpp"

#include <string>

#include "manetsim/error.hpp"

namespace manet::crypto {
namespace {

Bytes digest_to_bytes(const Digest256& d) { return Bytes(d.begin(), d.end()); }

void append_be64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (56 - 8 * i)));
}

}  // namespace

std::size_t KeyedDigestScheme::BytesHash::operator()(const Bytes& b) const {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (std::uint8_t c : b) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return static_cast<std::size_t>(h);
}

KeyPair KeyedDigestScheme::keygen(sim::RandomStream& rng) {
  KeyPair kp;
  kp.private_key.reserve(32);
  for (int i = 0; i < 4; ++i) {
    const std::uint64_t w = rng.next_u64();
    append_be64(kp.private_key, w);
  }
  Bytes tagged;
  tagged.push_back(0x01);
  tagged.insert(tagged.end(), kp.private_key.begin(), kp.private_key.end());
  kp.public_key = digest_to_bytes(sha256(tagged));
  private_by_public_[kp.public_key] = kp.private_key;
  return kp;
}

Signature KeyedDigestScheme::sign(const PrivateKey& key, const Bytes& message) const {
  Bytes tagged;
  tagged.reserve(1 + key.size() + 8 + message.size());
  tagged.push_back(0x02);
  tagged.insert(tagged.end(), key.begin(), key.end());
  append_be64(tagged, message.size());
  tagged.insert(tagged.end(), message.begin(), message.end());
  return digest_to_bytes(sha256(tagged));
}

bool KeyedDigestScheme::verify(const PublicKey& key, const Bytes& message,
                               const Signature& sig) const {
  auto it = private_by_public_.find(key);
  if (it == private_by_public_.end()) return false;
  return sign(it->second, message) == sig;
}

void KeyDirectory::add(NodeId node, PublicKey key) {
  if (frozen_) throw SimError("key directory is frozen");
  auto [it, inserted] = keys_.emplace(node, std::move(key));
  (void)it;
  if (!inserted) throw DuplicateNode("node " + std::to_string(node) + " already has a key");
}

const PublicKey* KeyDirectory::find(NodeId node) const {
  auto it = keys_.find(node);
  return it == keys_.end() ? nullptr : &it->second;
}

KeyAuthority::KeyAuthority(std::unique_ptr<SignatureScheme> scheme)
    : scheme_(std::move(scheme)) {}

void KeyAuthority::provision(NodeId node, sim::RandomStream& rng) {
  if (private_keys_.count(node))
    throw DuplicateNode("node " + std::to_string(node) + " already provisioned");
  KeyPair kp = scheme_->keygen(rng);
  directory_.add(node, kp.public_key);
  private_keys_[node] = std::move(kp.private_key);
}

const PrivateKey& KeyAuthority::private_key(NodeId node) const {
  auto it = private_keys_.find(node);
  if (it == private_keys_.end())
    throw SimError("no private key for node " + std::to_string(node));
  return it->second;
}

}  // namespace manet::crypto
