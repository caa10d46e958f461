#include "roadsel/rng.hpp"

#include "roadsel/error.hpp"

namespace roadsel {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_road: return "invalid-road";
    case ErrorKind::generation_exhausted: return "generation-exhausted";
    case ErrorKind::degenerate_training: return "degenerate-training";
    case ErrorKind::invalid_data: return "invalid-data";
    case ErrorKind::invalid_config: return "invalid-config";
    case ErrorKind::unsupported_model: return "unsupported-model";
    case ErrorKind::usage: return "usage";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return mix_seed(mix_seed(parent) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
  // Rejection sampling on the top of the range avoids modulo bias.
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

long long Rng::integer(long long lo, long long hi) {
  return lo + static_cast<long long>(index(static_cast<std::size_t>(hi - lo + 1)));
}

}  // namespace roadsel
