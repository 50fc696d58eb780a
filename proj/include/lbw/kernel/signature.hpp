#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lbw/error.hpp"

namespace lbw {

struct Symbol {
  std::string name;
  std::size_t arity = 0;

  bool operator==(Symbol const&) const = default;
};

/// An algebraic type: a finite list of operation symbols with fixed arities.
///
/// Symbols keep their declaration order, which fixes how tables are
/// serialized and terms generated.
class Signature {
 public:
  Signature() = default;

  explicit Signature(std::vector<Symbol> symbols) {
    for (auto& s : symbols) {
      add(std::move(s.name), s.arity);
    }
  }

  std::size_t add(std::string name, std::size_t arity) {
    if (find(name)) {
      throw Error("duplicate symbol '" + name + "' in signature");
    }
    symbols_.push_back({std::move(name), arity});
    return symbols_.size() - 1;
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol const& operator[](std::size_t i) const { return symbols_.at(i); }
  std::size_t arity(std::size_t i) const { return symbols_.at(i).arity; }
  std::string const& name(std::size_t i) const { return symbols_.at(i).name; }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].name == name) {
        return i;
      }
    }
    return std::nullopt;
  }

  std::size_t max_arity() const {
    std::size_t m = 0;
    for (auto const& s : symbols_) {
      m = std::max(m, s.arity);
    }
    return m;
  }

  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  bool operator==(Signature const&) const = default;

 private:
  std::vector<Symbol> symbols_;
};

}  // namespace lbw
