#pragma once

#include <cstdint>
#include <string>

#include "shelby/rational.hpp"

namespace shelby {

/// Protocol parameters: the full Table-1 symbol set plus the population size,
/// proof-noise level, extra-audit budget, reconstruction threshold and the
/// simulation seed. Monetary quantities are exact rationals (they arrive as
/// decimal text); use the *_d() accessors for Monte Carlo arithmetic.
struct ProtocolParams {
    int n = 0;                 // number of storage providers
    Rational r_s;              // storage reward per chunk per epoch
    Rational r_a;              // reward per reported-1 audit
    Rational c_s;              // cost to store a chunk per epoch
    Rational c_a;              // cost per audit performed
    Rational c_read;           // cost to read one chunk from another SP
    int p_s = 1;               // audit instances per auditee per epoch
    Rational p_a;              // inspection probability for a 1-entry
    Rational sigma_s;          // slash for a failed direct storage audit
    Rational sigma_a;          // slash for a failed audit-the-auditor inspection
    Rational epsilon;          // probability a transmitted proof arrives invalid
    int c_max = 0;             // maximum extra-audit volume
    int k = 1;                 // chunks needed to reconstruct one chunk
    std::uint64_t seed = 0;

    // Artifact knobs outside Table 1.
    int chunks = 1;                  // chunks held per SP; storage terms scale linearly
    int chunk_size = 64;             // synthetic chunk payload bytes
    std::string hash = "sha256";     // commitment hash algorithm, by name
    bool epsilon_on_chain = true;    // apply epsilon to on-chain extra-audit proofs too

    double r_s_d() const { return to_double(r_s); }
    double r_a_d() const { return to_double(r_a); }
    double c_s_d() const { return to_double(c_s); }
    double c_a_d() const { return to_double(c_a); }
    double c_read_d() const { return to_double(c_read); }
    double p_a_d() const { return to_double(p_a); }
    double sigma_s_d() const { return to_double(sigma_s); }
    double sigma_a_d() const { return to_double(sigma_a); }
    double epsilon_d() const { return to_double(epsilon); }
};

/// Throws std::invalid_argument naming the offending field. p_a = 0 is legal:
/// it models the off-chain-only benchmark with inspections disabled.
void validate(const ProtocolParams& params);

}  // namespace shelby
