#include "shelby/hash.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace shelby {

std::string to_hex(const Digest& d) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : d.bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Digest digest_from_hex(const std::string& hex) {
    if (hex.size() != 64) throw std::invalid_argument("digest hex must be 64 characters");
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw std::invalid_argument("invalid hex character");
    };
    Digest d;
    for (size_t i = 0; i < 32; ++i)
        d.bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return d;
}

Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

HashFunction::HashFunction(const std::string& name) : name_(name) {
    const EVP_MD* md = EVP_get_digestbyname(name.c_str());
    if (md == nullptr) throw std::invalid_argument("unknown hash algorithm: " + name);
    if (EVP_MD_get_size(md) != 32)
        throw std::invalid_argument("hash algorithm " + name + " does not produce 32-byte digests");
    md_ = md;
}

Digest HashFunction::operator()(std::span<const std::uint8_t> data) const {
    return (*this)({data});
}

Digest HashFunction::operator()(std::initializer_list<std::span<const std::uint8_t>> parts) const {
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
    Digest out;
    unsigned int len = 0;
    int ok = EVP_DigestInit_ex(ctx, static_cast<const EVP_MD*>(md_), nullptr);
    for (const auto& part : parts)
        if (ok) ok = EVP_DigestUpdate(ctx, part.data(), part.size());
    if (ok) ok = EVP_DigestFinal_ex(ctx, out.bytes.data(), &len);
    EVP_MD_CTX_free(ctx);
    if (!ok || len != 32) throw std::runtime_error("digest computation failed");
    return out;
}

}  // namespace shelby
