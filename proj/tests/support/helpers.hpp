#pragma once

#include <initializer_list>
#include <random>

#include "farpoint/geometry.hpp"

namespace testing_support {

inline farpoint::Vector vec(std::initializer_list<double> xs) {
  farpoint::Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline farpoint::Vector uniform_vector(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  farpoint::Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace testing_support
