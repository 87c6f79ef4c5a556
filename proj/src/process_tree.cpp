#include "fragalign/process_tree.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <deque>
#include <functional>

#include "fragalign/errors.hpp"

namespace fragalign {

const char* tree_op_symbol(TreeOp op) {
  switch (op) {
    case TreeOp::sequence: return "->";
    case TreeOp::exclusive: return "X";
    case TreeOp::parallel: return "+";
    case TreeOp::loop: return "*";
  }
  return "?";
}

namespace {

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::parse_error, what + " at offset " + std::to_string(pos), pos);
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  // A token runs up to the next structural character. Whether it names an
  // operator or an activity depends on whether '(' follows.
  std::string token() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != '(' && text[pos] != ')' && text[pos] != ',') pos++;
    std::string t(text.substr(start, pos - start));
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    if (t.empty()) fail("expected a node");
    return t;
  }

  uint32_t parse_node(std::vector<TreeNode>& nodes) {
    std::size_t token_pos = pos;
    std::string t = token();
    if (peek() == '(') {
      std::optional<TreeOp> op;
      if (t == "->") op = TreeOp::sequence;
      else if (t == "X") op = TreeOp::exclusive;
      else if (t == "+") op = TreeOp::parallel;
      else if (t == "*") op = TreeOp::loop;
      if (!op) {
        pos = token_pos;
        fail("unknown operator '" + t + "'");
      }
      uint32_t idx = static_cast<uint32_t>(nodes.size());
      nodes.emplace_back();
      nodes[idx].op = op;
      pos++;  // consume '('
      std::vector<uint32_t> children;
      children.push_back(parse_node(nodes));
      while (peek() == ',') {
        pos++;
        children.push_back(parse_node(nodes));
      }
      if (peek() != ')') fail("expected ',' or ')'");
      pos++;
      if (*op == TreeOp::loop && children.size() != 2) {
        throw Error(ErrorCode::arity_error,
                    "loop takes exactly two children, got " + std::to_string(children.size()),
                    token_pos);
      }
      if (children.size() < 2) {
        throw Error(ErrorCode::parse_error,
                    "operator " + t + " needs at least two children", token_pos);
      }
      for (uint32_t c : children) nodes[c].parent = idx;
      nodes[idx].children = std::move(children);
      return idx;
    }
    // Leaf.
    uint32_t idx = static_cast<uint32_t>(nodes.size());
    nodes.emplace_back();
    if (t != "tau") {
      if (t == ">>" || t == "\xcf\x84") {
        pos = token_pos;
        fail("reserved label '" + t + "'");
      }
      nodes[idx].label = std::move(t);
    }
    return idx;
  }
};

}  // namespace

ProcessTree ProcessTree::parse(std::string_view text) {
  Parser parser{text};
  ProcessTree tree;
  uint32_t root = parser.parse_node(tree.nodes_);
  parser.skip_ws();
  if (parser.pos != text.size()) parser.fail("trailing input");
  tree.root_ = root;
  tree.assign_names();
  return tree;
}

void ProcessTree::assign_names() {
  // Level-order numbering: the root is n0; a node at depth d is n<d>.<k>
  // with k counting within its level, left to right.
  name_index_.clear();
  std::deque<std::pair<uint32_t, uint32_t>> queue{{root_, 0}};
  uint32_t level = 0;
  uint32_t within = 0;
  while (!queue.empty()) {
    auto [n, depth] = queue.front();
    queue.pop_front();
    if (depth != level) {
      level = depth;
      within = 0;
    }
    within++;
    nodes_[n].name = depth == 0 ? "n0" : "n" + std::to_string(depth) + "." + std::to_string(within);
    name_index_.emplace(nodes_[n].name, n);
    for (uint32_t c : nodes_[n].children) queue.emplace_back(c, depth + 1);
  }
}

const TreeNode& ProcessTree::node(uint32_t n) const {
  if (n >= nodes_.size()) {
    throw Error(ErrorCode::unknown_node, "node index " + std::to_string(n) + " out of range");
  }
  return nodes_[n];
}

uint32_t ProcessTree::node_named(std::string_view name) const {
  auto it = name_index_.find(std::string(name));
  if (it == name_index_.end()) {
    throw Error(ErrorCode::unknown_node, "no node named " + std::string(name));
  }
  return it->second;
}

std::optional<uint32_t> ProcessTree::parent(uint32_t n) const {
  const TreeNode& nd = node(n);
  if (nd.parent < 0) return std::nullopt;
  return static_cast<uint32_t>(nd.parent);
}

ProcessTree ProcessTree::subtree(uint32_t n) const {
  node(n);  // range check
  ProcessTree out;
  // Preorder copy with index remapping.
  std::function<uint32_t(uint32_t)> copy = [&](uint32_t src) {
    uint32_t idx = static_cast<uint32_t>(out.nodes_.size());
    out.nodes_.emplace_back();
    out.nodes_[idx].op = nodes_[src].op;
    out.nodes_[idx].label = nodes_[src].label;
    for (uint32_t c : nodes_[src].children) {
      uint32_t child = copy(c);
      out.nodes_[idx].children.push_back(child);
      out.nodes_[child].parent = idx;
    }
    return idx;
  };
  out.root_ = copy(n);
  out.assign_names();
  return out;
}

std::vector<uint32_t> ProcessTree::leaves() const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < nodes_.size(); i++) {
    if (nodes_[i].is_leaf()) out.push_back(i);
  }
  return out;
}

std::set<std::string> ProcessTree::leaf_labels() const {
  std::set<std::string> out;
  for (uint32_t n : leaves()) {
    if (nodes_[n].label) out.insert(*nodes_[n].label);
  }
  return out;
}

uint32_t ProcessTree::minimal_enclosing_subtree(const std::set<std::string>& labels) const {
  std::vector<uint32_t> matching;
  for (uint32_t n : leaves()) {
    if (nodes_[n].label && labels.count(*nodes_[n].label)) matching.push_back(n);
  }
  if (matching.empty()) {
    throw Error(ErrorCode::no_matching_leaf, "no leaf labeled with any requested activity");
  }
  auto ancestors = [this](uint32_t n) {
    std::vector<uint32_t> path{n};
    while (nodes_[path.back()].parent >= 0) {
      path.push_back(static_cast<uint32_t>(nodes_[path.back()].parent));
    }
    return path;  // node .. root
  };
  std::vector<uint32_t> lca_path = ancestors(matching[0]);
  for (std::size_t i = 1; i < matching.size(); i++) {
    std::vector<uint32_t> other = ancestors(matching[i]);
    // Longest common suffix of the two root-ward paths.
    std::size_t a = lca_path.size(), b = other.size();
    std::size_t common = 0;
    while (common < a && common < b && lca_path[a - 1 - common] == other[b - 1 - common]) common++;
    lca_path.erase(lca_path.begin(), lca_path.end() - common);
  }
  uint32_t lca = lca_path.front();
  // A loop above the subtree can re-enter it, so the restriction must keep
  // the outermost loop context.
  uint32_t result = lca;
  int64_t up = nodes_[lca].parent;
  while (up >= 0) {
    if (nodes_[up].op == TreeOp::loop) result = static_cast<uint32_t>(up);
    up = nodes_[up].parent;
  }
  return result;
}

std::string ProcessTree::to_text() const {
  std::string out;
  std::function<void(uint32_t)> render = [&](uint32_t n) {
    const TreeNode& nd = nodes_[n];
    if (nd.is_leaf()) {
      out += nd.label ? *nd.label : "tau";
      return;
    }
    out += tree_op_symbol(*nd.op);
    out += "(";
    for (std::size_t i = 0; i < nd.children.size(); i++) {
      if (i) out += ",";
      render(nd.children[i]);
    }
    out += ")";
  };
  render(root_);
  return out;
}

ProcessTree restrict_to_submodel(const ProcessTree& tree,
                                 const std::vector<std::string>& activities) {
  std::set<std::string> labels(activities.begin(), activities.end());
  try {
    return tree.subtree(tree.minimal_enclosing_subtree(labels));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::no_matching_leaf) throw;
    return tree;
  }
}

}  // namespace fragalign
