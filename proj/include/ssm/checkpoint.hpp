#pragma once

#include <cstdint>
#include <string>

#include "ssm/ssm.hpp"

namespace ssm {

struct LoadedCheckpoint {
    SsmNetwork network;
    std::uint64_t seed = 0;
};

// Structured text: magic line, key=value header (dims, p, seed), then the
// weight and bias arrays row-major at 17 significant digits, so a save/load
// round trip is bit-exact.
void save_checkpoint(const std::string& path, const SsmNetwork& net, std::uint64_t seed);
LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace ssm
