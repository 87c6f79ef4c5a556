#include "fragalign/model_io.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fragalign/errors.hpp"

namespace pt = boost::property_tree;

namespace fragalign {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

pt::ptree parse_xml(const std::string& xml, const std::string& what) {
  try {
    std::istringstream in(xml);
    pt::ptree tree;
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    return tree;
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::xml_error, what + ": " + e.what());
  }
}

bool is_tau_text(const std::string& s) { return s.empty() || s == "tau" || s == "\xcf\x84"; }

uint32_t parse_token_count(const std::string& s, const std::string& what) {
  try {
    return static_cast<uint32_t>(std::stoul(s));
  } catch (const std::exception&) {
    throw Error(ErrorCode::parse_error, what + ": bad token count '" + s + "'");
  }
}

// The net content may sit directly under <net> or inside <page> elements.
void collect_net_children(const pt::ptree& node, pt::ptree& flat) {
  for (const auto& [key, child] : node) {
    if (key == "page") {
      collect_net_children(child, flat);
    } else {
      flat.push_back({key, child});
    }
  }
}

}  // namespace

PetriNet parse_pnml(const std::string& xml) {
  pt::ptree doc = parse_xml(xml, "pnml");
  auto pnml = doc.get_child_optional("pnml");
  if (!pnml) throw Error(ErrorCode::parse_error, "pnml: missing <pnml> root");
  auto net_node = pnml->get_child_optional("net");
  if (!net_node) throw Error(ErrorCode::parse_error, "pnml: missing <net>");

  pt::ptree flat;
  collect_net_children(*net_node, flat);

  PetriNet net;
  Marking initial;
  std::map<std::string, uint32_t> initial_by_name;

  for (const auto& [key, child] : flat) {
    if (key != "place") continue;
    auto id = child.get_optional<std::string>("<xmlattr>.id");
    if (!id) throw Error(ErrorCode::parse_error, "pnml: place without id");
    net.add_place(*id);
    auto tokens = child.get_optional<std::string>("initialMarking.text");
    if (tokens) {
      uint32_t n = parse_token_count(*tokens, "pnml");
      if (n > 0) initial_by_name[*id] = n;
    }
  }
  for (const auto& [key, child] : flat) {
    if (key != "transition") continue;
    auto id = child.get_optional<std::string>("<xmlattr>.id");
    if (!id) throw Error(ErrorCode::parse_error, "pnml: transition without id");
    auto name = child.get_optional<std::string>("name.text");
    std::optional<std::string> label;
    if (name && !is_tau_text(*name)) {
      if (*name == ">>") throw Error(ErrorCode::parse_error, "pnml: reserved label '>>'");
      label = *name;
    }
    net.add_transition(*id, std::move(label));
  }
  for (const auto& [key, child] : flat) {
    if (key != "arc") continue;
    auto source = child.get_optional<std::string>("<xmlattr>.source");
    auto target = child.get_optional<std::string>("<xmlattr>.target");
    if (!source || !target) throw Error(ErrorCode::parse_error, "pnml: arc without endpoints");
    auto sp = net.find_place(*source);
    auto tp = net.find_place(*target);
    auto st = net.find_transition(*source);
    auto tt = net.find_transition(*target);
    if (sp && tt) {
      net.add_arc_pt(*sp, *tt);
    } else if (st && tp) {
      net.add_arc_tp(*st, *tp);
    } else {
      throw Error(ErrorCode::parse_error,
                  "pnml: arc " + *source + " -> " + *target + " does not join a place and a transition");
    }
  }

  for (const auto& [name, count] : initial_by_name) {
    initial.add(*net.find_place(name), count);
  }
  net.initial_marking = initial;

  // Final marking: tool element first, unique structural sink as fallback.
  bool have_final = false;
  if (auto finals = net_node->get_child_optional("finalmarkings")) {
    auto marking = finals->get_child_optional("marking");
    if (marking) {
      Marking final;
      for (const auto& [key, child] : *marking) {
        if (key != "place") continue;
        auto ref = child.get_optional<std::string>("<xmlattr>.idref");
        auto tokens = child.get_optional<std::string>("text");
        if (!ref) throw Error(ErrorCode::parse_error, "pnml: final marking place without idref");
        auto p = net.find_place(*ref);
        if (!p) throw Error(ErrorCode::parse_error, "pnml: final marking references unknown place " + *ref);
        uint32_t n = tokens ? parse_token_count(*tokens, "pnml") : 1;
        if (n > 0) final.add(*p, n);
      }
      net.final_marking = final;
      have_final = true;
    }
  }
  if (!have_final) {
    std::vector<PlaceIdx> sinks;
    for (PlaceIdx p = 0; p < net.place_count(); p++) {
      if (net.consumers(p).empty()) sinks.push_back(p);
    }
    if (sinks.size() != 1) {
      throw Error(ErrorCode::parse_error,
                  "pnml: no final marking element and no unique sink place");
    }
    net.final_marking = Marking::single(sinks[0]);
  }
  return net;
}

PetriNet load_pnml(const std::string& path) { return parse_pnml(read_file(path)); }

ProcessTree parse_ptml(const std::string& xml) {
  pt::ptree doc = parse_xml(xml, "ptml");
  auto ptml = doc.get_child_optional("ptml");
  const pt::ptree* scope = ptml ? &*ptml : &doc;
  auto tree_node = scope->get_child_optional("processTree");
  if (!tree_node) throw Error(ErrorCode::parse_error, "ptml: missing <processTree>");

  struct RawNode {
    std::string kind;
    std::string name;
    std::vector<std::string> children;
  };
  std::map<std::string, RawNode> raw;
  std::vector<std::pair<std::string, std::string>> edges;  // (parent, child) in document order

  static const std::set<std::string> node_kinds = {
      "sequence", "xor", "and", "xorLoop", "manualTask", "automaticTask"};

  for (const auto& [key, child] : *tree_node) {
    if (key == "parentsNode") {
      auto source = child.get_optional<std::string>("<xmlattr>.sourceId");
      auto target = child.get_optional<std::string>("<xmlattr>.targetId");
      if (!source || !target) throw Error(ErrorCode::parse_error, "ptml: edge without endpoints");
      edges.emplace_back(*source, *target);
    } else if (node_kinds.count(key)) {
      auto id = child.get_optional<std::string>("<xmlattr>.id");
      if (!id) throw Error(ErrorCode::parse_error, "ptml: node without id");
      RawNode node;
      node.kind = key;
      node.name = child.get<std::string>("<xmlattr>.name", "");
      raw[*id] = std::move(node);
    }
  }
  for (const auto& [parent, child] : edges) {
    auto it = raw.find(parent);
    if (it == raw.end() || !raw.count(child)) {
      throw Error(ErrorCode::parse_error, "ptml: edge references unknown node");
    }
    it->second.children.push_back(child);
  }

  std::string root_id = tree_node->get<std::string>("<xmlattr>.root", "");
  if (root_id.empty()) {
    // No root attribute: the node that never appears as a child.
    std::set<std::string> child_ids;
    for (const auto& [parent, child] : edges) child_ids.insert(child);
    for (const auto& [id, node] : raw) {
      if (!child_ids.count(id)) {
        if (!root_id.empty()) throw Error(ErrorCode::parse_error, "ptml: multiple root nodes");
        root_id = id;
      }
    }
  }
  if (!raw.count(root_id)) throw Error(ErrorCode::parse_error, "ptml: root node not found");

  ProcessTree tree;
  std::set<std::string> building;  // cycle guard
  std::function<uint32_t(const std::string&)> build = [&](const std::string& id) -> uint32_t {
    if (!building.insert(id).second) {
      throw Error(ErrorCode::parse_error, "ptml: node " + id + " is its own ancestor");
    }
    const RawNode& rn = raw.at(id);
    uint32_t idx = static_cast<uint32_t>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    if (rn.kind == "manualTask" || rn.kind == "automaticTask") {
      if (!rn.children.empty()) throw Error(ErrorCode::parse_error, "ptml: task with children");
      if (rn.kind == "manualTask" && !is_tau_text(rn.name)) {
        tree.nodes_[idx].label = rn.name;
      }
      return idx;
    }
    TreeOp op;
    if (rn.kind == "sequence") op = TreeOp::sequence;
    else if (rn.kind == "xor") op = TreeOp::exclusive;
    else if (rn.kind == "and") op = TreeOp::parallel;
    else op = TreeOp::loop;
    std::vector<std::string> child_ids = rn.children;
    if (op == TreeOp::loop && child_ids.size() == 3) {
      // do, redo, exit convention: a silent exit child is dropped.
      const RawNode& exit = raw.at(child_ids[2]);
      bool silent_exit = exit.kind == "automaticTask" ||
                         (exit.kind == "manualTask" && is_tau_text(exit.name));
      if (!silent_exit) {
        throw Error(ErrorCode::arity_error, "ptml: xorLoop with a non-silent exit child");
      }
      child_ids.pop_back();
    }
    if (op == TreeOp::loop && child_ids.size() != 2) {
      throw Error(ErrorCode::arity_error, "ptml: xorLoop takes two children");
    }
    if (child_ids.size() < 2) {
      throw Error(ErrorCode::parse_error, "ptml: operator " + rn.kind + " needs two children");
    }
    tree.nodes_[idx].op = op;
    for (const auto& cid : child_ids) {
      uint32_t child = build(cid);
      tree.nodes_[idx].children.push_back(child);
      tree.nodes_[child].parent = idx;
    }
    return idx;
  };
  tree.root_ = build(root_id);
  tree.assign_names();
  return tree;
}

ProcessTree load_ptml(const std::string& path) { return parse_ptml(read_file(path)); }

ProcessTree load_tree_text(const std::string& path) {
  return ProcessTree::parse(read_file(path));
}

}  // namespace fragalign
