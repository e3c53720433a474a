#ifndef MSP_CORE_RNG_HPP
#define MSP_CORE_RNG_HPP

#include "msp/core/types.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace msp {

/// Counter-based 64-bit generator. Draw i of stream (seed, stream_index) is
/// a pure function of (seed, stream_index, i), so independent trials can run
/// on any thread in any order and still reproduce bit-for-bit.
class RngStream
{
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0)
    : seed_(seed), stream_(stream_index)
  {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64()
  {
    std::uint64_t key = mix(seed_ ^ mix(stream_ + 0x9e3779b97f4a7c15ULL));
    return mix(key + (counter_++) * 0xd1b54a32d192ed03ULL);
  }

  /// Uniform on the open interval (0, 1).
  double uniform()
  {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; no state is carried between calls.
  double normal()
  {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vector uniform_vector(Index n)
  {
    Vector v(n);
    for (Index i = 0; i < n; ++i)
      v(i) = uniform();
    return v;
  }

  Vector normal_vector(Index n)
  {
    Vector v(n);
    for (Index i = 0; i < n; ++i)
      v(i) = normal();
    return v;
  }

  Matrix uniform_matrix(Index rows, Index cols)
  {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i)
        m(i, j) = uniform();
    return m;
  }

  Matrix normal_matrix(Index rows, Index cols)
  {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i)
        m(i, j) = normal();
    return m;
  }

private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t z)
  {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

} // namespace msp

#endif
