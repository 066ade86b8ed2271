#pragma once

#include <array>
#include <cstdint>

namespace fdtlab {

/// Philox 4x32 counter-based generator, 10 rounds. Pure function of
/// (counter, key), so any path/step combination can be generated in any
/// order on any thread with identical output.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Deterministic scalar stream addressed by (seed, stream id). Each Philox
/// block yields two doubles; uniforms lie in (0, 1].
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  double uniform();
  double normal();  // Box-Muller pair, one value cached

 private:
  std::array<double, 2> next_block();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Stream id with a purpose tag in the top byte, so different uses of the
/// same path index never overlap.
std::uint64_t stream_id(std::uint64_t path_index, std::uint8_t purpose);

}  // namespace fdtlab
