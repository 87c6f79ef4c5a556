#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fragalign/petri_net.hpp"

namespace fragalign {

enum class TreeOp : uint8_t { sequence, exclusive, parallel, loop };

struct TreeNode {
  std::optional<TreeOp> op;           // set for operator nodes
  std::optional<std::string> label;   // set for activity leaves
  std::vector<uint32_t> children;
  int64_t parent = -1;
  std::string name;                   // level-order: n0, n1.1, n1.2, ..., n2.1, ...

  bool is_leaf() const { return !op.has_value(); }
  bool is_tau() const { return is_leaf() && !label.has_value(); }
};

// Process tree over the operators sequence (->), exclusive choice (X),
// parallel (+) and loop (*). Leaves are activities or tau. Node order is
// depth-first preorder; display names are assigned level by level.
class ProcessTree {
public:
  // Text grammar: node := activity | "tau" | op "(" node ("," node)+ ")"
  // with op one of "->", "X", "+", "*". A loop takes exactly two children
  // (do-part, redo-part); other operators take two or more.
  static ProcessTree parse(std::string_view text);

  std::size_t node_count() const { return nodes_.size(); }
  uint32_t root() const { return root_; }
  const TreeNode& node(uint32_t n) const;
  // Lookup by display name, e.g. "n1.2". Throws Error(unknown_node).
  uint32_t node_named(std::string_view name) const;

  const std::vector<uint32_t>& children(uint32_t n) const { return node(n).children; }
  std::optional<uint32_t> parent(uint32_t n) const;

  // Copy of the subtree rooted at n, preorder kept, names reassigned.
  ProcessTree subtree(uint32_t n) const;

  // Root of the minimal subtree containing every leaf whose label is in
  // `labels`, lifted to the highest loop ancestor if one exists. Throws
  // Error(no_matching_leaf) when no leaf matches.
  uint32_t minimal_enclosing_subtree(const std::set<std::string>& labels) const;

  std::vector<uint32_t> leaves() const;
  std::set<std::string> leaf_labels() const;

  std::string to_text() const;

private:
  void assign_names();
  std::vector<TreeNode> nodes_;
  uint32_t root_ = 0;
  std::unordered_map<std::string, uint32_t> name_index_;

  friend ProcessTree load_ptml(const std::string& path);
  friend ProcessTree parse_ptml(const std::string& xml);
};

struct TreeNetBinding {
  PetriNet net;
  // Every leaf (tau leaves included) gets exactly one transition carrying
  // its label. Plumbing transitions (splits, joins, loop control) have no
  // leaf.
  std::unordered_map<uint32_t, TransIdx> leaf_to_transition;
  std::unordered_map<TransIdx, uint32_t> transition_to_leaf;
};

// Standard workflow-net translation. The result passes
// validate_workflow_net for every tree.
TreeNetBinding to_wfnet(const ProcessTree& tree);

// Subtree the alignment search can be restricted to for an infix of the
// given activities: whole tree if no leaf matches.
ProcessTree restrict_to_submodel(const ProcessTree& tree,
                                 const std::vector<std::string>& activities);

const char* tree_op_symbol(TreeOp op);

}  // namespace fragalign
