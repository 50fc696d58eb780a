#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "lbw/error.hpp"
#include "lbw/kernel/algebra.hpp"

namespace lbw {

/// An equivalence relation on {0..n-1} in canonical form: each element
/// carries a block id, and ids appear in first-occurrence order. Two
/// partitions are equal iff their id vectors are.
class Partition {
 public:
  Partition() = default;

  /// Normalizes an arbitrary labelling into canonical block ids.
  template <typename Label>
  static Partition from_labels(std::vector<Label> const& labels) {
    Partition p;
    p.ids_.resize(labels.size());
    std::map<Label, std::size_t> seen;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, inserted] = seen.emplace(labels[i], seen.size());
      p.ids_[i] = it->second;
    }
    p.blocks_ = seen.size();
    return p;
  }

  static Partition identity(std::size_t n) {
    std::vector<std::size_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    return from_labels(ids);
  }

  static Partition total(std::size_t n) {
    return from_labels(std::vector<std::size_t>(n, 0));
  }

  static Partition from_blocks(std::size_t n, std::vector<std::vector<Elem>> const& blocks) {
    std::vector<std::size_t> labels(n, std::size_t(-1));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (auto e : blocks[b]) {
        if (e >= n || labels[e] != std::size_t(-1)) {
          throw Error("blocks do not form a partition");
        }
        labels[e] = b;
      }
    }
    for (auto& l : labels) {
      if (l == std::size_t(-1)) {
        throw Error("blocks do not cover the universe");
      }
    }
    return from_labels(labels);
  }

  // Two-block partition {S, complement}; a single block when S is empty or full.
  static Partition split_by(ElemSet const& s) {
    std::vector<int> labels(s.universe());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      labels[i] = s.contains(static_cast<Elem>(i)) ? 1 : 0;
    }
    return from_labels(labels);
  }

  std::size_t universe() const noexcept { return ids_.size(); }
  std::size_t num_blocks() const noexcept { return blocks_; }
  std::size_t block_of(Elem e) const { return ids_.at(e); }
  std::vector<std::size_t> const& ids() const noexcept { return ids_; }
  bool related(Elem a, Elem b) const { return ids_.at(a) == ids_.at(b); }

  bool is_identity() const { return blocks_ == ids_.size(); }
  bool is_total() const { return blocks_ <= 1; }

  std::vector<std::vector<Elem>> blocks() const {
    std::vector<std::vector<Elem>> out(blocks_);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      out[ids_[i]].push_back(static_cast<Elem>(i));
    }
    return out;
  }

  // Least element of each block, indexed by block id.
  std::vector<Elem> representatives() const {
    std::vector<Elem> reps(blocks_, kUnbound);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (reps[ids_[i]] == kUnbound) {
        reps[ids_[i]] = static_cast<Elem>(i);
      }
    }
    return reps;
  }

  /// Inclusion of relations: every block of *this lies inside a block of `o`.
  bool refines(Partition const& o) const {
    check_same(o);
    std::vector<std::size_t> target(blocks_, std::size_t(-1));
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      auto& t = target[ids_[i]];
      if (t == std::size_t(-1)) {
        t = o.ids_[i];
      } else if (t != o.ids_[i]) {
        return false;
      }
    }
    return true;
  }

  /// Intersection of relations (block-id product, renormalized).
  Partition meet(Partition const& o) const {
    check_same(o);
    std::vector<std::pair<std::size_t, std::size_t>> labels(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      labels[i] = {ids_[i], o.ids_[i]};
    }
    return from_labels(labels);
  }

  /// Equivalence generated by the union of both relations.
  Partition join(Partition const& o) const {
    check_same(o);
    std::vector<std::size_t> parent(ids_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
      }
      return x;
    };
    for (auto const* p : {this, &o}) {
      auto reps = p->representatives();
      for (std::size_t i = 0; i < ids_.size(); ++i) {
        parent[find(i)] = find(reps[p->ids_[i]]);
      }
    }
    std::vector<std::size_t> labels(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      labels[i] = find(i);
    }
    return from_labels(labels);
  }

  /// F is a union of blocks.
  bool compatible_with(ElemSet const& f) const {
    std::vector<int> state(blocks_, -1);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      int in = f.contains(static_cast<Elem>(i)) ? 1 : 0;
      auto& s = state[ids_[i]];
      if (s == -1) {
        s = in;
      } else if (s != in) {
        return false;
      }
    }
    return true;
  }

  std::string render(std::vector<std::string> const& names) const {
    std::string out = "{";
    auto bs = blocks();
    for (std::size_t b = 0; b < bs.size(); ++b) {
      out += b ? ",{" : "{";
      for (std::size_t j = 0; j < bs[b].size(); ++j) {
        out += (j ? "," : "") + names.at(bs[b][j]);
      }
      out += "}";
    }
    return out + "}";
  }

  std::string render(FiniteAlgebra const& a) const { return render(a.names()); }

  bool operator==(Partition const& o) const { return ids_ == o.ids_; }
  bool operator<(Partition const& o) const { return ids_ < o.ids_; }

 private:
  void check_same(Partition const& o) const {
    if (o.ids_.size() != ids_.size()) {
      throw Error("partitions over different universes");
    }
  }

  std::vector<std::size_t> ids_;
  std::size_t blocks_ = 0;
};

}  // namespace lbw
