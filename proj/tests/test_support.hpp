#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include <json.hpp>

#include "infoot/io.hpp"
#include "infoot/kernels.hpp"

namespace testing {

inline infoot::Matrix random_points(infoot::Index n, infoot::Index d, std::uint64_t seed,
                                    double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  infoot::Matrix m(n, d);
  for (infoot::Index i = 0; i < n; ++i)
    for (infoot::Index c = 0; c < d; ++c) m(i, c) = u(rng);
  return m;
}

inline infoot::Vector random_simplex(infoot::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  infoot::Vector v(n);
  for (infoot::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v / v.sum();
}

inline infoot::Vector uniform(infoot::Index n) {
  return infoot::Vector::Constant(n, 1.0 / static_cast<double>(n));
}

inline std::filesystem::path scratch(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::path(INFOOT_TEST_TMP) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
