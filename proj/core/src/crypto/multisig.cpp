#include "manetsim/crypto/multisig.hpp"

#include <string>
#include <unordered_set>

#include "manetsim/error.hpp"

namespace manet::crypto {
namespace {

void append_be16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void append_be32(Bytes& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (24 - 8 * i)));
}

// Entry i signs the canonical packet bytes followed by the signer-id list
// through position i. The ids double as the packet's hop list, so the image
// matches (immutable fields || hop_list prefix) seen by that signer.
Bytes signed_message(const Bytes& canonical, const std::vector<MultiSigEntry>& entries,
                     std::size_t through, NodeId last) {
  Bytes msg = canonical;
  append_be16(msg, static_cast<std::uint16_t>(through + 1));
  for (std::size_t i = 0; i < through; ++i) append_be32(msg, entries[i].signer);
  append_be32(msg, last);
  return msg;
}

}  // namespace

Bytes chain_bytes(const MultiSig& chain) {
  Bytes out;
  append_be16(out, static_cast<std::uint16_t>(chain.entries.size()));
  for (const auto& e : chain.entries) {
    append_be32(out, e.signer);
    append_be16(out, static_cast<std::uint16_t>(e.sig.size()));
    out.insert(out.end(), e.sig.begin(), e.sig.end());
  }
  return out;
}

MultiSig chain_append(MultiSig chain, NodeId signer, const PrivateKey& key,
                      const Bytes& canonical, const SignatureScheme& scheme) {
  for (const auto& e : chain.entries) {
    if (e.signer == signer)
      throw DuplicateSigner("node " + std::to_string(signer) + " already in chain");
  }
  MultiSigEntry entry;
  entry.signer = signer;
  entry.sig = scheme.sign(
      key, signed_message(canonical, chain.entries, chain.entries.size(), signer));
  chain.entries.push_back(std::move(entry));
  return chain;
}

ChainVerdict chain_verify(const MultiSig& chain, const KeyDirectory& directory,
                          const Bytes& canonical, const SignatureScheme& scheme) {
  std::unordered_set<NodeId> seen;
  for (std::size_t i = 0; i < chain.entries.size(); ++i) {
    const auto& e = chain.entries[i];
    if (!seen.insert(e.signer).second) return ChainVerdict{false, i};
    const PublicKey* pub = directory.find(e.signer);
    if (pub == nullptr) return ChainVerdict{false, i};
    if (!scheme.verify(*pub, signed_message(canonical, chain.entries, i, e.signer),
                       e.sig))
      return ChainVerdict{false, i};
  }
  return ChainVerdict{true, 0};
}

}  // namespace manet::crypto
