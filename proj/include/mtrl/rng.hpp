#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace mtrl {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable seed for a stream identified by a tuple of integers under a master
/// seed. Independent of evaluation order, so sweeps can run in any schedule.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// rows x cols matrix of iid standard normal draws, filled column-major.
inline Eigen::MatrixXd standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  return out;
}

}  // namespace mtrl
