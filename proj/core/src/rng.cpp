#include "riscnoma/rng.hpp"

#include <cmath>

namespace riscnoma {

std::uint64_t mix64(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(h);
}

CounterRng::result_type CounterRng::operator()() noexcept {
  const std::uint64_t c = counter_++;
  return mix64(key_ ^ mix64(c + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

cplx CounterRng::complex_normal() noexcept {
  const double re = normal();
  const double im = normal();
  return {re * kInvSqrt2, im * kInvSqrt2};
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  if (n <= 1) return 0;
  // rejection sampling for an unbiased draw
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t v = (*this)();
  while (v >= limit) v = (*this)();
  return v % n;
}

CounterRng CounterRng::substream(std::string_view label) const noexcept {
  return CounterRng(mix64(key_ ^ hash_label(label)));
}

CounterRng CounterRng::substream(std::uint64_t index) const noexcept {
  return CounterRng(mix64(key_ + mix64(index ^ 0xd1b54a32d192ed03ULL)));
}

}  // namespace riscnoma
