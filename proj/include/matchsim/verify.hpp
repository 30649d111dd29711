#pragma once

// Self-checks run by `matchsim verify`: exhaustive enumeration against closed
// forms, and the engine's pairing sampler against exact probabilities.

#include <cstdint>
#include <string>
#include <vector>

namespace matchsim {

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::int64_t pairing_samples = 100'000;
    std::vector<std::int32_t> scan_lifetimes{16, 100};
    std::vector<std::int32_t> partition_lifetimes{4, 16, 64, 100, 256};
};

std::vector<VerifyCheck> run_verification(const VerifyOptions& options = {});

}  // namespace matchsim
