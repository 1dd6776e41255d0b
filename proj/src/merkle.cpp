#include "shelby/merkle.hpp"

#include <stdexcept>

namespace shelby {

namespace {
constexpr std::uint8_t kLeafPrefix = 0x00;
constexpr std::uint8_t kNodePrefix = 0x01;
}  // namespace

Digest MerkleTree::leaf_hash(std::span<const std::uint8_t> leaf) const {
    return hash_({std::span(&kLeafPrefix, 1), leaf});
}

Digest MerkleTree::node_hash(const Digest& left, const Digest& right) const {
    return hash_({std::span(&kNodePrefix, 1), std::span(left.bytes), std::span(right.bytes)});
}

VectorCommitment MerkleTree::build_commitment(const std::vector<Bytes>& leaves) const {
    if (leaves.empty()) throw std::invalid_argument("cannot commit to an empty leaf sequence");

    std::vector<Digest> level;
    level.reserve(leaves.size());
    for (const auto& leaf : leaves) level.push_back(leaf_hash(leaf));

    while (level.size() > 1) {
        std::vector<Digest> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2)
            next.push_back(node_hash(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(level.back());
        level = std::move(next);
    }
    return VectorCommitment{level.front(), leaves.size()};
}

InclusionProof MerkleTree::open_inclusion(const std::vector<Bytes>& leaves,
                                          std::size_t index) const {
    if (index >= leaves.size())
        throw std::out_of_range("leaf index " + std::to_string(index) + " out of range for " +
                                std::to_string(leaves.size()) + " leaves");

    std::vector<Digest> level;
    level.reserve(leaves.size());
    for (const auto& leaf : leaves) level.push_back(leaf_hash(leaf));

    InclusionProof proof;
    proof.leaf_index = index;
    proof.leaf_digest = level[index];

    std::size_t idx = index;
    while (level.size() > 1) {
        if (idx % 2 == 0 && idx + 1 < level.size()) {
            proof.sibling_path.push_back({level[idx + 1], Side::Right});
        } else if (idx % 2 == 1) {
            proof.sibling_path.push_back({level[idx - 1], Side::Left});
        }
        // An even idx with no right neighbour is the promoted last node of an
        // odd level: it rises without contributing a path element.

        std::vector<Digest> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2)
            next.push_back(node_hash(level[i], level[i + 1]));
        if (level.size() % 2 == 1) next.push_back(level.back());
        level = std::move(next);
        idx /= 2;
    }
    return proof;
}

bool MerkleTree::verify_inclusion(const Digest& root, const InclusionProof& proof,
                                  std::span<const std::uint8_t> expected_leaf) const {
    if (leaf_hash(expected_leaf) != proof.leaf_digest) return false;

    Digest current = proof.leaf_digest;
    std::size_t idx = proof.leaf_index;
    for (const auto& [sibling, side] : proof.sibling_path) {
        if (side == Side::Left) {
            // The running node must be a right child. An even index is only
            // consistent if the node was promoted through odd levels first.
            while (idx % 2 == 0) {
                if (idx == 0) return false;
                idx /= 2;
            }
            current = node_hash(sibling, current);
        } else {
            if (idx % 2 != 0) return false;
            current = node_hash(current, sibling);
        }
        idx /= 2;
    }
    return current == root;
}

VectorCommitment MerkleTree::commit_responses(const std::vector<Bytes>& responses) const {
    if (responses.empty()) {
        // Empty-sentinel: the leaf hash of the empty byte string, leaf_count 0.
        return VectorCommitment{leaf_hash(std::span<const std::uint8_t>{}), 0};
    }
    return build_commitment(responses);
}

}  // namespace shelby
