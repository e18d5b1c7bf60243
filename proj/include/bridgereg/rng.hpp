#pragma once

#include <cstdint>
#include <random>

namespace bridgereg {

/// The library's single random source. The engine is std::mt19937_64, whose
/// output sequence is fixed by the standard; the uniform and normal
/// transforms are implemented here instead of using the std distributions,
/// whose algorithms are implementation-defined.
class Rng {
 public:
  static constexpr const char* kAlgorithm =
      "mt19937_64+splitmix64-seeding+boxmuller";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal();

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based child seed: independent streams per (stream, index) pair.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index);

/// Stream identifiers used with derive_seed.
namespace streams {
inline constexpr std::uint64_t kDataset = 1;
inline constexpr std::uint64_t kImpediment = 2;
inline constexpr std::uint64_t kMonteCarlo = 3;
inline constexpr std::uint64_t kRestarts = 4;
}  // namespace streams

}  // namespace bridgereg
