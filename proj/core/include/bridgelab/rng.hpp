#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bridgelab {

using Seed = std::uint64_t;
using Engine = std::mt19937_64;

// Counter-based seed derivation: mixes `master` with each word of `path`
// through splitmix64 so that sibling streams are decorrelated and the result
// depends only on the arguments, never on call order.
Seed derive_seed(Seed master, std::initializer_list<std::uint64_t> path);

// Stream tags used as the first word of a derivation path.
enum class Stream : std::uint64_t {
  design = 0x64657369676eULL,
  noise = 0x6e6f697365ULL,
  bootstrap = 0x626f6f74ULL,
  limit = 0x6c696d6974ULL,
};

inline Engine make_engine(Seed seed) { return Engine(seed); }

}  // namespace bridgelab
