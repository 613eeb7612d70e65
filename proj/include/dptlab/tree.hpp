#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dptlab {

/// Deterministic query tree over k inputs of n bits each. Internal nodes
/// query bit `index` of input `instance` (both 0-based here, 1-based in
/// text); the left child is taken on 0. Leaves carry an output tuple.
class KFoldTree {
 public:
  struct Node {
    bool leaf = true;
    int instance = 0;
    int index = 0;
    int left = -1;
    int right = -1;
    std::vector<std::uint32_t> outputs;
  };

  KFoldTree() = default;

  int add_leaf(std::vector<std::uint32_t> outputs);
  int add_query(int instance, int index, int left, int right);
  void set_root(int id) { root_ = id; }

  int root() const noexcept { return root_; }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  /// Width of every leaf tuple (k, or 1 for an XOR-style tree).
  int output_width() const;
  int depth() const;
  std::size_t leaf_count() const;

  /// Throws MalformedTree unless the tree is well formed for k inputs of
  /// `arity` bits whose leaves all have `width` outputs below `codomain`.
  void validate(int k, int arity, int width, int codomain) const;

  /// Follows the path for the given inputs and returns the leaf id.
  int leaf_for(std::span<const std::uint32_t> inputs, int arity) const;

  /// `(q <j> <i> <left> <right>)` / `(leaf b1 ... bk)`, 1-based.
  static KFoldTree parse(std::string_view text);
  std::string to_string() const;

 private:
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace dptlab
