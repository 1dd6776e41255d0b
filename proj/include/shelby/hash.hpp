#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace shelby {

using Bytes = std::vector<std::uint8_t>;

/// 32-byte digest of a 256-bit cryptographic hash.
struct Digest {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Digest&) const = default;
};

std::string to_hex(const Digest& d);
Digest digest_from_hex(const std::string& hex);

Bytes to_bytes(std::string_view s);

/// A named 256-bit hash function. Backed by the OpenSSL EVP registry, so any
/// digest OpenSSL knows by name works as long as its output is 32 bytes
/// ("sha256" is the default; "sha3-256" and "blake2s256" also qualify).
/// Instances are stateless handles and safe to share across threads.
class HashFunction {
  public:
    explicit HashFunction(const std::string& name = "sha256");

    Digest operator()(std::span<const std::uint8_t> data) const;
    Digest operator()(std::initializer_list<std::span<const std::uint8_t>> parts) const;

    const std::string& name() const { return name_; }

  private:
    std::string name_;
    const void* md_;  // EVP_MD*
};

}  // namespace shelby
