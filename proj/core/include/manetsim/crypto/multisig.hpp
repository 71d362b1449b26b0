#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "manetsim/crypto/signature.hpp"
#include "manetsim/types.hpp"

namespace manet::crypto {

struct MultiSigEntry {
  NodeId signer = kNoNode;
  Signature sig;
  bool operator==(const MultiSigEntry&) const = default;
};

/// Ordered signature chain over a control packet. Entry i signs the
/// packet's canonical bytes concatenated with the signer-id list through
/// position i (count-prefixed, big-endian), so no entry can be dropped,
/// reordered, or spliced onto another packet without breaking verification.
/// The signer list is exactly the packet's hop list, which receivers check
/// separately.
struct MultiSig {
  std::vector<MultiSigEntry> entries;
  bool operator==(const MultiSig&) const = default;
};

/// Chain serialization: BE16 count, then per entry BE32 signer id,
/// BE16 signature length, signature bytes.
Bytes chain_bytes(const MultiSig& chain);

/// Appends one signature. Throws DuplicateSigner if the signer already
/// appears in the chain.
MultiSig chain_append(MultiSig chain, NodeId signer, const PrivateKey& key,
                      const Bytes& canonical, const SignatureScheme& scheme);

struct ChainVerdict {
  bool valid = false;
  /// Index of the first failing entry when invalid.
  std::size_t at_index = 0;
};

/// Verifies the whole chain in order against the directory. Unknown
/// signers, duplicate signers, and bad signatures all invalidate, at the
/// first offending index. An empty chain is valid (trusted origination
/// handles it at a higher layer).
ChainVerdict chain_verify(const MultiSig& chain, const KeyDirectory& directory,
                          const Bytes& canonical, const SignatureScheme& scheme);

}  // namespace manet::crypto
