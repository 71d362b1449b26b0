#pragma once

#include <map>
#include <memory>
#include <unordered_map>

#include "manetsim/crypto/sha256.hpp"
#include "manetsim/sim/random.hpp"
#include "manetsim/types.hpp"

namespace manet::crypto {

using PublicKey = Bytes;
using PrivateKey = Bytes;
using Signature = Bytes;

struct KeyPair {
  PublicKey public_key;
  PrivateKey private_key;
};

/// Signing backend interface. The simulation ships one deterministic
/// dependency-free scheme; a real cipher suite can be slotted in behind
/// this without touching routing code.
class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual KeyPair keygen(sim::RandomStream& rng) = 0;
  virtual Signature sign(const PrivateKey& key, const Bytes& message) const = 0;
  virtual bool verify(const PublicKey& key, const Bytes& message,
                      const Signature& sig) const = 0;
};

/// Keyed-digest scheme with real byte-level verification:
///   private = 32 stream bytes
///   public  = SHA256(0x01 || private)
///   sig     = SHA256(0x02 || private || BE64(len) || message)
/// verify() looks the private key up from the public key in a table this
/// scheme keeps from keygen, then recomputes the digest. Unknown public
/// keys never verify. Forgery inside the simulation is impossible as long
/// as node code only ever holds its own private key; the scheme object
/// (and its table) stays inside the engine.
class KeyedDigestScheme : public SignatureScheme {
 public:
  KeyPair keygen(sim::RandomStream& rng) override;
  Signature sign(const PrivateKey& key, const Bytes& message) const override;
  bool verify(const PublicKey& key, const Bytes& message,
              const Signature& sig) const override;

 private:
  struct BytesHash {
    std::size_t operator()(const Bytes& b) const;
  };
  std::unordered_map<Bytes, Bytes, BytesHash> private_by_public_;
};

/// Public key registry distributed to every node before a run, mirroring
/// offline key provisioning. Freezes after setup.
class KeyDirectory {
 public:
  /// Throws DuplicateNode on a second key for the same id and SimError
  /// after freeze().
  void add(NodeId node, PublicKey key);
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  const PublicKey* find(NodeId node) const;
  std::size_t size() const { return keys_.size(); }

 private:
  std::map<NodeId, PublicKey> keys_;
  bool frozen_ = false;
};

/// Bundles the scheme, the directory, and per-node private keys for one
/// simulation run.
class KeyAuthority {
 public:
  explicit KeyAuthority(std::unique_ptr<SignatureScheme> scheme);

  /// Generates and registers a key pair for a node. Throws DuplicateNode
  /// if the node already has one.
  void provision(NodeId node, sim::RandomStream& rng);
  void freeze() { directory_.freeze(); }

  const KeyDirectory& directory() const { return directory_; }
  const SignatureScheme& scheme() const { return *scheme_; }
  /// Node's own private key; only the owning node's context exposes it.
  const PrivateKey& private_key(NodeId node) const;

 private:
  std::unique_ptr<SignatureScheme> scheme_;
  KeyDirectory directory_;
  std::map<NodeId, PrivateKey> private_keys_;
};

}  // namespace manet::crypto
