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

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "amdlv/amdl.h"

namespace amdlv {
namespace {

void CollectQueries(Condition& cond, std::vector<Query>& out, bool assign) {
  for (Condition& sub : cond.operands) CollectQueries(sub, out, assign);
  if (cond.kind != Condition::Kind::kMember) return;
  Query q{cond.relation, cond.atoms};
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i] == q) {
      if (assign) cond.query = static_cast<int>(i);
      return;
    }
  }
  if (assign) cond.query = static_cast<int>(out.size());
  out.push_back(std::move(q));
}

void CollectQueries(GuardedCommand& gc, std::vector<Query>& out, bool assign) {
  if (gc.is_choice) {
    for (GuardedCommand& alt : gc.alternatives) {
      CollectQueries(alt, out, assign);
    }
    return;
  }
  CollectQueries(gc.guard, out, assign);
  for (Action& a : gc.actions) {
    if (a.kind == Action::Kind::kAssign) CollectQueries(a.value, out, assign);
  }
}

void CollectConstants(const Condition& cond, std::set<std::string>& out) {
  for (const Condition& sub : cond.operands) CollectConstants(sub, out);
  for (const Atom& a : cond.atoms) {
    if (!a.is_field()) out.insert(a.constant);
  }
}

void CollectConstants(const GuardedCommand& gc, std::set<std::string>& out) {
  for (const GuardedCommand& alt : gc.alternatives) CollectConstants(alt, out);
  CollectConstants(gc.guard, out);
  for (const Action& a : gc.actions) {
    for (const Atom& atom : a.atoms) {
      if (!atom.is_field()) out.insert(atom.constant);
    }
    CollectConstants(a.value, out);
  }
}

std::string Fresh(const std::string& base, const std::set<std::string>& taken) {
  std::string name = base;
  for (int k = 1; taken.count(name) != 0; ++k) {
    name = base + std::to_string(k);
  }
  return name;
}

}  // namespace

std::vector<Query> ExtractQueries(const MiddleboxProgram& program) {
  MiddleboxProgram copy = program;
  std::vector<Query> out;
  for (PacketBlock& b : copy.blocks) CollectQueries(b.body, out, false);
  return out;
}

void IndexQueries(MiddleboxProgram& program) {
  program.queries.clear();
  for (PacketBlock& b : program.blocks) {
    CollectQueries(b.body, program.queries, true);
  }
}

MiddleboxProgram MergePacketBlocks(const MiddleboxProgram& program) {
  std::vector<std::vector<const PacketBlock*>> groups;
  std::vector<std::string> order;
  for (const PacketBlock& b : program.blocks) {
    size_t g = 0;
    while (g < order.size() && order[g] != b.channel) ++g;
    if (g == order.size()) {
      order.push_back(b.channel);
      groups.emplace_back();
    }
    groups[g].push_back(&b);
  }
  if (groups.size() == program.blocks.size()) return program;

  MiddleboxProgram out = program;
  out.blocks.clear();
  for (const auto& group : groups) {
    if (group.size() == 1) {
      out.blocks.push_back(*group[0]);
      continue;
    }
    std::set<std::string> constants;
    int arity = 0;
    for (const PacketBlock* b : group) {
      CollectConstants(b->body, constants);
      arity = std::max(arity, b->binding.arity());
    }
    PacketBlock merged;
    merged.channel = group[0]->channel;
    merged.pos = group[0]->pos;
    merged.binding = group[0]->binding;
    bool clash = false;
    if (merged.binding.is_record()) {
      clash = constants.count(merged.binding.record) != 0;
    } else {
      for (const std::string& f : merged.binding.fields) {
        clash = clash || constants.count(f) != 0;
      }
    }
    if (clash) {
      merged.binding = FieldBinding{};
      std::set<std::string> taken = constants;
      for (int i = 0; i < arity; ++i) {
        std::string name = Fresh("f" + std::to_string(i), taken);
        taken.insert(name);
        merged.binding.fields.push_back(name);
      }
    }
    if (!merged.binding.is_record()) {
      std::set<std::string> taken = constants;
      taken.insert(merged.binding.fields.begin(), merged.binding.fields.end());
      while (merged.binding.arity() < arity) {
        std::string name = Fresh("dummy", taken);
        taken.insert(name);
        merged.binding.fields.push_back(name);
      }
    }
    merged.body.is_choice = true;
    merged.body.pos = group[0]->body.pos;
    for (const PacketBlock* b : group) {
      merged.body.alternatives.push_back(b->body);
    }
    out.blocks.push_back(std::move(merged));
  }
  IndexQueries(out);
  return out;
}

}  // namespace amdlv
