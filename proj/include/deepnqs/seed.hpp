#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>

namespace deepnqs {

/// SplitMix64 output function (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a master seed with a sequence of indices. Pure integer arithmetic,
/// so the result is identical on every platform.
std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> indices);
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices);

}  // namespace deepnqs
