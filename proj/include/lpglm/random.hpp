#pragma once

#include <cstdint>
#include <random>

namespace lpglm {

using Rng = std::mt19937_64;

/// Independent, reproducible stream for replication `index` of a run seeded with `master`.
inline Rng substream(std::uint64_t master, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x9e3779b9u};
    return Rng(seq);
}

}  // namespace lpglm
