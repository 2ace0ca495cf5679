#pragma once

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

namespace cexplore::detail {

// Classic two-colour nested depth-first search for an accepting cycle.
// Nodes are 64-bit keys; a node is accepting iff its lowest bit is set.
// `successors(node, out)` fills `out` with the node's successors in the
// order they should be explored.
template <class Successors>
class NestedDfs {
 public:
  explicit NestedDfs(Successors successors) : successors_(std::move(successors)) {}

  bool from(std::uint64_t root) {
    if (blue_.count(root)) return false;
    return blue(root);
  }

 private:
  static bool accepting(std::uint64_t node) { return (node & 1u) != 0; }

  bool blue(std::uint64_t node) {
    blue_.insert(node);
    std::vector<std::uint64_t> next;
    successors_(node, next);
    for (std::uint64_t t : next) {
      if (!blue_.count(t) && blue(t)) return true;
    }
    return accepting(node) && red(node, node);
  }

  bool red(std::uint64_t node, std::uint64_t seed) {
    red_.insert(node);
    std::vector<std::uint64_t> next;
    successors_(node, next);
    for (std::uint64_t t : next) {
      if (t == seed) return true;
      if (!red_.count(t) && red(t, seed)) return true;
    }
    return false;
  }

  Successors successors_;
  std::unordered_set<std::uint64_t> blue_;
  std::unordered_set<std::uint64_t> red_;
};

}  // namespace cexplore::detail
