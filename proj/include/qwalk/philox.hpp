#pragma once

#include <array>
#include <cstdint>

namespace qwalk {

// Philox4x32-10 (Salmon et al.): a keyed bijection on 128-bit counters. Each
// trial owns the counter range (trial, block, *), so streams never overlap.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Block operator()(Block counter) const {
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kMul0} * counter[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * counter[2];
      counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0], static_cast<std::uint32_t>(p1),
                 static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return counter;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  std::array<std::uint32_t, 2> key_;
};

// Sequential 32-bit draws from one trial's counter range.
class TrialStream {
 public:
  TrialStream(const Philox4x32& engine, std::uint64_t trial)
      : engine_(engine), trial_(trial) {}

  std::uint32_t next() {
    if (used_ == 4) {
      buffer_ = engine_({static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32),
                         block_, 0u});
      ++block_;
      used_ = 0;
    }
    return buffer_[used_++];
  }

 private:
  const Philox4x32& engine_;
  std::uint64_t trial_;
  std::uint32_t block_ = 0;
  Philox4x32::Block buffer_{};
  int used_ = 4;
};

}  // namespace qwalk
