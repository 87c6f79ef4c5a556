#include <functional>
#include <string>

#include "fragalign/errors.hpp"
#include "fragalign/process_tree.hpp"

namespace fragalign {

namespace {

struct Builder {
  const ProcessTree& tree;
  TreeNetBinding out;
  uint32_t place_seq = 0;
  uint32_t trans_seq = 0;

  PlaceIdx fresh_place() { return out.net.add_place("p" + std::to_string(++place_seq)); }

  TransIdx fresh_trans(const std::string& suffix, std::optional<std::string> label) {
    return out.net.add_transition("t" + std::to_string(++trans_seq) + "_" + suffix,
                                  std::move(label));
  }

  void build(uint32_t n, PlaceIdx src, PlaceIdx snk) {
    const TreeNode& nd = tree.node(n);
    if (nd.is_leaf()) {
      TransIdx t = fresh_trans(nd.label ? *nd.label : "tau", nd.label);
      out.net.add_arc_pt(src, t);
      out.net.add_arc_tp(t, snk);
      out.leaf_to_transition.emplace(n, t);
      out.transition_to_leaf.emplace(t, n);
      return;
    }
    const auto& cs = nd.children;
    switch (*nd.op) {
      case TreeOp::sequence: {
        PlaceIdx prev = src;
        for (std::size_t i = 0; i < cs.size(); i++) {
          PlaceIdx next = i + 1 == cs.size() ? snk : fresh_place();
          build(cs[i], prev, next);
          prev = next;
        }
        break;
      }
      case TreeOp::exclusive: {
        for (uint32_t c : cs) build(c, src, snk);
        break;
      }
      case TreeOp::parallel: {
        TransIdx split = fresh_trans("split", std::nullopt);
        TransIdx join = fresh_trans("join", std::nullopt);
        out.net.add_arc_pt(src, split);
        out.net.add_arc_tp(join, snk);
        for (uint32_t c : cs) {
          PlaceIdx csrc = fresh_place();
          PlaceIdx csnk = fresh_place();
          out.net.add_arc_tp(split, csrc);
          out.net.add_arc_pt(csnk, join);
          build(c, csrc, csnk);
        }
        break;
      }
      case TreeOp::loop: {
        // do-part between a fresh entry place and the decision place; the
        // redo-part loops back to the entry. Entering and leaving are silent
        // so the surrounding block keeps single-entry/single-exit.
        PlaceIdx entry = fresh_place();
        PlaceIdx decision = fresh_place();
        TransIdx enter = fresh_trans("enter", std::nullopt);
        out.net.add_arc_pt(src, enter);
        out.net.add_arc_tp(enter, entry);
        build(cs[0], entry, decision);
        PlaceIdx rsrc = fresh_place();
        PlaceIdx rsnk = fresh_place();
        TransIdx redo = fresh_trans("redo", std::nullopt);
        out.net.add_arc_pt(decision, redo);
        out.net.add_arc_tp(redo, rsrc);
        build(cs[1], rsrc, rsnk);
        TransIdx back = fresh_trans("back", std::nullopt);
        out.net.add_arc_pt(rsnk, back);
        out.net.add_arc_tp(back, entry);
        TransIdx exit = fresh_trans("exit", std::nullopt);
        out.net.add_arc_pt(decision, exit);
        out.net.add_arc_tp(exit, snk);
        break;
      }
    }
  }
};

}  // namespace

TreeNetBinding to_wfnet(const ProcessTree& tree) {
  Builder builder{tree, {}};
  PlaceIdx source = builder.out.net.add_place("source");
  PlaceIdx sink = builder.out.net.add_place("sink");
  builder.build(tree.root(), source, sink);
  builder.out.net.initial_marking = Marking::single(source);
  builder.out.net.final_marking = Marking::single(sink);
  return builder.out;
}

}  // namespace fragalign
