#ifndef ILA_RNG_HPP
#define ILA_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

#include "ila/common.hpp"

namespace ila {

// Philox4x32-10 counter-based generator (Salmon et al., Random123). Each
// invocation is a pure function of (counter, key), giving random access into
// the stream: no state to carry, no sequential dependency between draws.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Standard-normal noise addressed by (seed, stream, step, slot). A stream is
// one chain; slot indexes the normals consumed within a single step. Chains
// and steps can therefore be evaluated in any order, on any number of
// workers, with identical results.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream)),
        stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

  // Normals for slots [0, out.size()) of the given step.
  void fill_normals(std::uint32_t step, Vec& out) const {
    const Eigen::Index n = out.size();
    for (Eigen::Index pair = 0; 2 * pair < n; ++pair) {
      const auto [z0, z1] = normal_pair(step, static_cast<std::uint32_t>(pair));
      out[2 * pair] = z0;
      if (2 * pair + 1 < n) out[2 * pair + 1] = z1;
    }
  }

  double normal(std::uint32_t step, std::uint32_t slot) const {
    const auto [z0, z1] = normal_pair(step, slot / 2);
    return (slot % 2 == 0) ? z0 : z1;
  }

  // Uniform in (0, 1), same addressing.
  double uniform(std::uint32_t step, std::uint32_t slot) const {
    const auto w = Philox4x32::block({slot, step, stream_lo_, stream_hi_}, key_);
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    return to_unit(bits);
  }

  // Step index reserved for initial-state draws.
  static constexpr std::uint32_t kInitStep = 0xFFFFFFFFu;

 private:
  static double to_unit(std::uint64_t bits) {
    // 53-bit mantissa, offset by half an ulp so the result is in (0, 1).
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  std::pair<double, double> normal_pair(std::uint32_t step,
                                        std::uint32_t pair) const {
    const auto w = Philox4x32::block({pair, step, stream_lo_, stream_hi_}, key_);
    const std::uint64_t b0 = (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
    const std::uint64_t b1 = (static_cast<std::uint64_t>(w[2]) << 32) | w[3];
    const double u1 = to_unit(b0);
    const double u2 = to_unit(b1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
};

}  // namespace ila

#endif
