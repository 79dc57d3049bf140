// Copyright 2026 The Tiers Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TIERS_TRACE_HPP_
#define TIERS_TRACE_HPP_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/grammar.hpp"

namespace tiers {

// One rewrite: `lhs` at `position` of the sentential form becomes `rhs`.
struct TraceStep {
  std::size_t position = 0;
  SymbolString lhs;
  SymbolString rhs;
  int alternative = -1;  // declared alternative index, -1 for forced rewrites
  bool forced = false;
  int part = -1;         // generator part the step belongs to
  std::string note;      // index annotation ("push sg", "pop pl", ...)

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct DerivationTrace {
  std::vector<TraceStep> steps;

  friend bool operator==(const DerivationTrace&, const DerivationTrace&) = default;
};

inline void apply_step(const Grammar& g, SymbolString& form, const TraceStep& step) {
  if (step.position + step.lhs.size() > form.size() ||
      !std::equal(step.lhs.begin(), step.lhs.end(), form.begin() + step.position)) {
    throw Error(ErrorKind::kInternal,
                "trace step does not match the form at position " +
                    std::to_string(step.position) + " (" +
                    (step.lhs.empty() ? std::string("?") : g.name(step.lhs[0])) + ")");
  }
  form.erase(form.begin() + step.position, form.begin() + step.position + step.lhs.size());
  form.insert(form.begin() + step.position, step.rhs.begin(), step.rhs.end());
}

// Replays `trace` from the start symbol and returns the final form.
inline SymbolString replay(const Grammar& g, const DerivationTrace& trace) {
  SymbolString form{g.start()};
  for (const TraceStep& step : trace.steps) apply_step(g, form, step);
  return form;
}

struct TreeNode {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  SymbolId symbol;
  std::size_t parent = kNone;
  std::vector<std::size_t> children;
  std::size_t step = kNone;  // step that rewrote this node
  std::size_t begin = kNone;  // token span of the yield, [begin, end)
  std::size_t end = kNone;
};

// Derivation tree rebuilt from a trace. Multi-symbol rewrites hang their
// right-hand side under the first left-hand node.
class DerivationTree {
 public:
  static DerivationTree build(const Grammar& g, const DerivationTrace& trace) {
    DerivationTree tree;
    tree.nodes_.push_back(TreeNode{g.start(), TreeNode::kNone, {}});
    std::vector<std::size_t> form{0};
    for (std::size_t s = 0; s < trace.steps.size(); ++s) {
      const TraceStep& step = trace.steps[s];
      if (step.position + step.lhs.size() > form.size()) {
        throw Error(ErrorKind::kInternal, "trace step outside the form");
      }
      const std::size_t owner = form[step.position];
      for (std::size_t k = 0; k < step.lhs.size(); ++k) {
        const std::size_t node = form[step.position + k];
        if (tree.nodes_[node].symbol != step.lhs[k]) {
          throw Error(ErrorKind::kInternal, "trace step does not match the tree");
        }
        tree.nodes_[node].step = s;
      }
      std::vector<std::size_t> fresh;
      for (SymbolId child : step.rhs) {
        TreeNode node{child, TreeNode::kNone, {}};
        node.parent = owner;
        tree.nodes_.push_back(node);
        fresh.push_back(tree.nodes_.size() - 1);
      }
      tree.nodes_[owner].children.insert(tree.nodes_[owner].children.end(), fresh.begin(),
                                         fresh.end());
      form.erase(form.begin() + step.position,
                 form.begin() + step.position + step.lhs.size());
      form.insert(form.begin() + step.position, fresh.begin(), fresh.end());
    }
    tree.leaves_ = form;
    for (std::size_t i = 0; i < form.size(); ++i) {
      for (std::size_t n = form[i]; n != TreeNode::kNone; n = tree.nodes_[n].parent) {
        auto& node = tree.nodes_[n];
        node.begin = node.begin == TreeNode::kNone ? i : std::min(node.begin, i);
        node.end = node.end == TreeNode::kNone ? i + 1 : std::max(node.end, i + 1);
      }
    }
    return tree;
  }

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(std::size_t id) const { return nodes_.at(id); }
  std::size_t root() const { return 0; }
  // Node ids of the final sentential form, left to right.
  const std::vector<std::size_t>& leaves() const { return leaves_; }

 private:
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> leaves_;
};

}  // namespace tiers

#endif  // TIERS_TRACE_HPP_
