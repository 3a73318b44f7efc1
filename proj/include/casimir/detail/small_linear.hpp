#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "casimir/core.hpp"

namespace casimir::detail {

/// Gaussian elimination with partial pivoting for small dense systems.
/// Scalar may be double or a Boost.Multiprecision type.
template <class Scalar, std::size_t N>
std::array<Scalar, N> solve_dense(std::array<std::array<Scalar, N>, N> m,
                                  std::array<Scalar, N> rhs) {
  using std::abs;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < N; ++row) {
      if (abs(m[row][col]) > abs(m[pivot][col])) pivot = row;
    }
    if (m[pivot][col] == Scalar(0)) {
      throw DomainError("singular linear system");
    }
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (std::size_t row = col + 1; row < N; ++row) {
      const Scalar factor = m[row][col] / m[col][col];
      if (factor == Scalar(0)) continue;
      for (std::size_t k = col; k < N; ++k) m[row][k] -= factor * m[col][k];
      rhs[row] -= factor * rhs[col];
    }
  }
  std::array<Scalar, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    Scalar sum = rhs[i];
    for (std::size_t k = i + 1; k < N; ++k) sum -= m[i][k] * x[k];
    x[i] = sum / m[i][i];
  }
  return x;
}

}  // namespace casimir::detail
