#pragma once

#include <cstddef>
#include <vector>

#include "shelby/hash.hpp"

namespace shelby {

/// Merkle root plus the number of committed leaves.
struct VectorCommitment {
    Digest root;
    std::size_t leaf_count = 0;

    bool operator==(const VectorCommitment&) const = default;
};

/// Which side a sibling digest sits on relative to the running node.
enum class Side : std::uint8_t { Left, Right };

struct ProofNode {
    Digest digest;
    Side side;
};

struct InclusionProof {
    std::size_t leaf_index = 0;
    Digest leaf_digest;
    std::vector<ProofNode> sibling_path;
};

/// Canonical binary Merkle tree over byte-string leaves.
///
/// Layout: left-filled; when a level has odd width the last node is promoted
/// to the next level unchanged (no re-hashing). Leaf and interior hashing are
/// domain-separated with prefix bytes 0x00 / 0x01 so a leaf can never be
/// confused with an encoded pair of children.
class MerkleTree {
  public:
    explicit MerkleTree(HashFunction hash = HashFunction{}) : hash_(std::move(hash)) {}

    Digest leaf_hash(std::span<const std::uint8_t> leaf) const;
    Digest node_hash(const Digest& left, const Digest& right) const;

    /// Root over a non-empty leaf sequence. Throws std::invalid_argument on
    /// an empty sequence: the protocol never commits to zero chunks.
    VectorCommitment build_commitment(const std::vector<Bytes>& leaves) const;

    /// Inclusion proof for leaves[index]; throws std::out_of_range when
    /// index >= leaves.size().
    InclusionProof open_inclusion(const std::vector<Bytes>& leaves, std::size_t index) const;

    /// True iff the proof ties expected_leaf at proof.leaf_index to root.
    /// Malformed proofs return false; this never throws.
    bool verify_inclusion(const Digest& root, const InclusionProof& proof,
                          std::span<const std::uint8_t> expected_leaf) const;

    /// Commitment over an ordered sequence of audit responses (order fixed by
    /// (auditee id, audit instance id) upstream). An empty sequence commits
    /// to the designated empty-sentinel leaf with leaf_count 0, since an
    /// auditor may legitimately have zero successful responses.
    VectorCommitment commit_responses(const std::vector<Bytes>& responses) const;

  private:
    HashFunction hash_;
};

}  // namespace shelby
