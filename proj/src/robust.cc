// Copyright 2026 The amdlv authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "amdlv/robust.h"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "amdlv/error.h"
#include "amdlv/relation_semantics.h"

namespace amdlv {
namespace {

using StateSet = std::vector<uint32_t>;

struct Node {
  StateSet full;
  StateSet suffix;
  bool started = false;

  friend auto operator<=>(const Node&, const Node&) = default;
};

class RobustSearch {
 public:
  RobustSearch(const CompiledProgram& program, const PacketSpace& space)
      : program_(program), space_(space) {
    Intern(RelationState::Initial(program));
    for (size_t c = 0; c < program.channels.size(); ++c) {
      if (program.leaves[c].empty()) continue;
      for (PacketId p = 0; p < space.size(); ++p) {
        inputs_.push_back(RobustInput{space.At(p), static_cast<int>(c)});
      }
    }
    forward_.assign(inputs_.size(), std::nullopt);
  }

  RobustResult Run(int bound) {
    RobustResult result;
    std::vector<Node> nodes;
    std::vector<std::pair<size_t, size_t>> parent;
    std::map<Node, size_t> seen;
    nodes.push_back(Node{StateSet{0}, {}, false});
    parent.emplace_back(SIZE_MAX, 0);
    seen.emplace(nodes[0], 0);
    std::vector<size_t> depth{0};
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (depth[i] >= static_cast<size_t>(bound)) continue;
      for (size_t a = 0; a < inputs_.size(); ++a) {
        StateSet full = Post(nodes[i].full, a);
        if (HasErr(full)) continue;
        std::vector<Node> next;
        if (nodes[i].started) {
          next.push_back(Node{full, Post(nodes[i].suffix, a), true});
        } else {
          next.push_back(Node{full, {}, false});
          next.push_back(Node{full, Post(StateSet{0}, a), true});
        }
        for (Node& n : next) {
          auto [it, inserted] = seen.emplace(n, nodes.size());
          if (!inserted) continue;
          bool violation = n.started && HasErr(n.suffix);
          nodes.push_back(std::move(n));
          parent.emplace_back(i, a);
          depth.push_back(depth[i] + 1);
          if (violation) {
            result.robust = false;
            result.nodes = nodes.size();
            Witness(nodes, parent, nodes.size() - 1, result);
            return result;
          }
        }
      }
    }
    result.nodes = nodes.size();
    return result;
  }

 private:
  uint32_t Intern(RelationState s) {
    auto [it, inserted] =
        index_.emplace(std::move(s), static_cast<uint32_t>(states_.size()));
    if (inserted) states_.push_back(it->first);
    return it->second;
  }

  bool HasErr(const StateSet& set) const {
    for (uint32_t s : set) {
      if (states_[s].is_err) return true;
    }
    return false;
  }

  StateSet Post(const StateSet& from, size_t a) {
    const RobustInput& in = inputs_[a];
    StateSet out;
    for (uint32_t s : from) {
      RelationState current = states_[s];
      for (RelationOutcome& o :
           StepRelation(program_, current, in.packet, in.channel)) {
        if (!o.state.is_err) CheckForward(a, o.emission);
        out.push_back(Intern(std::move(o.state)));
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  void CheckForward(size_t a, const Emission& emission) {
    const RobustInput& in = inputs_[a];
    if (emission.size() != 1 || !(emission[0].packet == in.packet)) {
      throw Error(ErrorKind::kValidation,
                  "program '" + program_.name +
                      "' is not a safety middlebox: a step does not forward "
                      "the input packet unchanged");
    }
    if (!forward_[a]) {
      forward_[a] = emission[0].channel;
    } else if (*forward_[a] != emission[0].channel) {
      throw Error(ErrorKind::kValidation,
                  "program '" + program_.name +
                      "' is not a safety middlebox: output channel depends "
                      "on state");
    }
  }

  void Witness(const std::vector<Node>& nodes,
               const std::vector<std::pair<size_t, size_t>>& parent,
               size_t at, RobustResult& result) const {
    std::vector<size_t> path;
    for (size_t n = at; parent[n].first != SIZE_MAX; n = parent[n].first) {
      path.push_back(n);
    }
    std::reverse(path.begin(), path.end());
    result.suffix_start = path.size();
    for (size_t k = 0; k < path.size(); ++k) {
      result.sequence.push_back(inputs_[parent[path[k]].second]);
      if (nodes[path[k]].started && result.suffix_start == path.size()) {
        result.suffix_start = k;
      }
    }
  }

  const CompiledProgram& program_;
  const PacketSpace& space_;
  std::vector<RobustInput> inputs_;
  std::vector<std::optional<int>> forward_;
  std::map<RelationState, uint32_t> index_;
  std::vector<RelationState> states_;
};

}  // namespace

RobustResult CheckRevertRobust(const CompiledProgram& program,
                               const PacketSpace& space, int bound) {
  if (bound < 1) throw Error(ErrorKind::kUsage, "bound must be at least 1");
  return RobustSearch(program, space).Run(bound);
}

RobustResult CheckRevertRobust(const Topology& topology, int mbox, int bound) {
  return CheckRevertRobust(topology.middleboxes[mbox].program, topology.space,
                           bound);
}

std::string DescribeRobustWitness(const Topology& topology, int mbox,
                                  const RobustResult& result) {
  const CompiledProgram& program = topology.middleboxes[mbox].program;
  std::string out;
  for (size_t i = 0; i < result.sequence.size(); ++i) {
    if (i == result.suffix_start) out += "| ";
    const RobustInput& in = result.sequence[i];
    out += program.channels[in.channel] + "?" +
           topology.PacketName(in.packet) + " ";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

}  // namespace amdlv
