#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace cyldiff {

// splitmix64 step: advances state and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// xoshiro256** generator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(const std::array<std::uint64_t, 4>& s) noexcept : s_(s) {}

  // Independent stream for (seed, index). The pair is treated as a 128-bit
  // key: each half is run through a splitmix64 finalizer, the two are folded
  // together and the result seeds a splitmix64 sequence that fills the
  // 256-bit state. Streams depend only on (seed, index), never on scheduling.
  static Xoshiro256 stream(std::uint64_t seed, std::uint64_t index) noexcept;

  result_type operator()() noexcept;
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::array<std::uint64_t, 4> s_;
};

// Fair +-1 symbols, 64 per generator call.
class SymbolSource {
 public:
  explicit SymbolSource(Xoshiro256& gen) noexcept : gen_(gen) {}
  int next() noexcept {
    if (left_ == 0) {
      bits_ = gen_();
      left_ = 64;
    }
    const int s = (bits_ & 1u) ? 1 : -1;
    bits_ >>= 1;
    --left_;
    return s;
  }

 private:
  Xoshiro256& gen_;
  std::uint64_t bits_ = 0;
  int left_ = 0;
};

// Resolves a thread-count hint: 0 means hardware concurrency.
unsigned resolve_threads(unsigned hint) noexcept;

// Runs body(i) for i in [0, n) on up to `threads` workers. If any call
// throws, the exception from the smallest failing index is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace cyldiff
