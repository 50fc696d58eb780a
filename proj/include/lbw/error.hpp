#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lbw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured resource bound was hit. `reached` reports how far the
// computation got (elements generated, sets enumerated, ...).
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string const& what, std::size_t reached)
      : Error(what), reached_(reached) {}
  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

}  // namespace lbw
