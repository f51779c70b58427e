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

#include "amdlv/relation_semantics.h"

#include <algorithm>
#include <string>
#include <vector>

namespace amdlv {
namespace {

TupleCode Pack(const CompiledProgram& program, int relation,
               const ValueCode* values) {
  return PackTuple(values,
                   static_cast<int>(program.relations[relation].sorts.size()));
}

std::string ValueName(ValueCode v) {
  return IsTagValue(v) ? "t" + std::to_string(ValueIndex(v))
                       : "h" + std::to_string(ValueIndex(v));
}

}  // namespace

RelationState RelationState::Initial(const CompiledProgram& program) {
  RelationState s;
  s.tuples.resize(program.relations.size());
  return s;
}

RelationState RelationState::Err(const CompiledProgram& program) {
  RelationState s = Initial(program);
  s.is_err = true;
  return s;
}

bool RelationState::Contains(int relation, TupleCode tuple) const {
  const auto& v = tuples[relation];
  return std::binary_search(v.begin(), v.end(), tuple);
}

void RelationState::Set(int relation, TupleCode tuple, bool present) {
  auto& v = tuples[relation];
  auto it = std::lower_bound(v.begin(), v.end(), tuple);
  bool found = it != v.end() && *it == tuple;
  if (present && !found) v.insert(it, tuple);
  if (!present && found) v.erase(it);
}

bool RelationState::Member(const StepContext& ctx, int query,
                           const Packet& p) const {
  const CompiledQuery& q = ctx.program.queries[query];
  ValueCode values[4];
  for (size_t i = 0; i < q.atoms.size(); ++i) values[i] = q.atoms[i].Eval(p);
  return Contains(q.relation, Pack(ctx.program, q.relation, values));
}

void RelationState::Assign(const StepContext& ctx, int relation,
                           const ValueCode* values, bool b, const Packet&) {
  Set(relation, Pack(ctx.program, relation, values), b);
}

void RelationState::SetErr() {
  is_err = true;
  for (auto& v : tuples) v.clear();
}

ValueCode EvalAtom(const CompiledAtom& atom, const Packet& p) {
  return atom.Eval(p);
}

bool EvalRelationCond(const CompiledProgram& program, int cond,
                      const RelationState& state, const Packet& p) {
  PacketSpace none;
  StepContext ctx{program, none};
  return EvalCond(ctx, cond, state, p);
}

std::vector<RelationOutcome> StepRelation(const CompiledProgram& program,
                                          const RelationState& state,
                                          const Packet& p, int channel) {
  PacketSpace none;
  StepContext ctx{program, none};
  std::vector<RelationOutcome> out;
  ExecuteStep(ctx, channel, p, state,
              [&](const RelationState& s, const Emission& e) {
                out.push_back(RelationOutcome{s, e});
              });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string DescribeRelationState(const CompiledProgram& program,
                                  const RelationState& state) {
  if (state.is_err) return "err";
  std::string out;
  for (size_t r = 0; r < program.relations.size(); ++r) {
    if (r > 0) out += ", ";
    out += program.relations[r].name + ":{";
    int arity = static_cast<int>(program.relations[r].sorts.size());
    for (size_t k = 0; k < state.tuples[r].size(); ++k) {
      if (k > 0) out += ",";
      TupleCode t = state.tuples[r][k];
      out += "(";
      for (int i = arity - 1; i >= 0; --i) {
        out += ValueName(static_cast<ValueCode>(t >> (16 * i)));
        if (i > 0) out += ",";
      }
      out += ")";
    }
    out += "}";
  }
  return out;
}

}  // namespace amdlv
