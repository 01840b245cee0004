#pragma once

#include <cstdint>
#include <random>

namespace herdsim {

using Engine = std::mt19937_64;

/// Independent engine for trajectory `index` of a run seeded with `seed`.
/// Streams for distinct (seed, index) pairs are decorrelated through seed_seq mixing.
inline Engine make_stream(std::uint64_t seed, std::uint64_t index = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x68657264u};
    return Engine(seq);
}

}  // namespace herdsim
