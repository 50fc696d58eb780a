#pragma once

#include <string>
#include <utility>

#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"

namespace lbw {

/// A logical matrix: an algebra with a designated subset (its truth set).
struct Matrix {
  FiniteAlgebra algebra;
  ElemSet designated;

  Matrix() = default;
  Matrix(FiniteAlgebra a, ElemSet d) : algebra(std::move(a)), designated(std::move(d)) {
    if (designated.universe() != algebra.size()) {
      throw Error("designated set does not match the universe");
    }
  }

  bool almost_trivial() const { return designated.empty(); }

  std::string render() const { return algebra.render_set(designated); }

  bool operator==(Matrix const&) const = default;
};

}  // namespace lbw
