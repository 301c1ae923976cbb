#include "deepnqs/seed.hpp"

namespace deepnqs {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> indices) {
  std::uint64_t h = splitmix64(master);
  std::uint64_t position = 0;
  for (std::uint64_t index : indices) {
    // Position-dependent salt keeps (a, b) and (b, a) apart.
    h = splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL * ++position));
  }
  return splitmix64(h ^ indices.size());
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices) {
  return derive_seed(master, std::span<const std::uint64_t>(indices.begin(), indices.size()));
}

}  // namespace deepnqs
