#include "shelby/params.hpp"

#include <stdexcept>

namespace shelby {

void validate(const ProtocolParams& p) {
    auto reject = [](const std::string& why) { throw std::invalid_argument(why); };

    if (p.n < 3) reject("n must be at least 3");
    if (p.p_s < 1) reject("p_s must be at least 1");
    if (p.p_a < 0 || p.p_a > 1) reject("p_a must lie in [0, 1]");
    if (p.epsilon < 0 || p.epsilon >= 1) reject("epsilon must lie in [0, 1)");
    if (p.r_s < 0) reject("r_s must be non-negative");
    if (p.r_a < 0) reject("r_a must be non-negative");
    if (p.c_s < 0) reject("c_s must be non-negative");
    if (p.c_a < 0) reject("c_a must be non-negative");
    if (p.c_read < 0) reject("c_read must be non-negative");
    if (p.sigma_s < 0) reject("sigma_s must be non-negative");
    if (p.sigma_a < 0) reject("sigma_a must be non-negative");
    if (p.c_max < 0) reject("c_max must be non-negative");
    if (p.k < 1) reject("k must be at least 1");
    if (p.chunks < 1) reject("chunks must be at least 1");
    if (p.chunk_size < 1) reject("chunk_size must be at least 1");
}

}  // namespace shelby
