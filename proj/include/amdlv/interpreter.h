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

#ifndef AMDLV_INTERPRETER_H_
#define AMDLV_INTERPRETER_H_

#include <vector>

#include "amdlv/packet.h"
#include "amdlv/program.h"

namespace amdlv {

struct Send {
  Packet packet;
  int channel = -1;

  friend bool operator==(const Send&, const Send&) = default;
  friend auto operator<=>(const Send&, const Send&) = default;
};

// Packets emitted by one step, in program order.
using Emission = std::vector<Send>;

struct StepContext {
  const CompiledProgram& program;
  const PacketSpace& space;
};

// One AST walk shared by every state representation. A Model provides
//   bool err() const;
//   bool Member(const StepContext&, int query, const Packet& input) const;
//   void Assign(const StepContext&, int relation, const ValueCode* values,
//               bool b, const Packet& input);
//   void SetErr();
template <class Model>
bool EvalCond(const StepContext& ctx, int node, const Model& state,
              const Packet& p) {
  const CompiledCond& c = ctx.program.conds[node];
  switch (c.op) {
    case CompiledCond::Op::kTrue:
      return true;
    case CompiledCond::Op::kFalse:
      return false;
    case CompiledCond::Op::kAnd:
      return EvalCond(ctx, c.lhs, state, p) && EvalCond(ctx, c.rhs, state, p);
    case CompiledCond::Op::kNot:
      return !EvalCond(ctx, c.lhs, state, p);
    case CompiledCond::Op::kEq:
      return c.a.Eval(p) == c.b.Eval(p);
    case CompiledCond::Op::kMember:
      return !state.err() && state.Member(ctx, c.query, p);
  }
  return false;
}

template <class Model>
void RunActions(const StepContext& ctx, const CompiledLeaf& leaf,
                const Packet& p, Model& state, Emission& out) {
  for (const CompiledAction& a : leaf.actions) {
    if (state.err()) return;
    switch (a.kind) {
      case CompiledAction::Kind::kSend: {
        Packet q;
        q.src = static_cast<uint16_t>(ValueIndex(a.atoms[0].Eval(p)));
        q.dst = static_cast<uint16_t>(ValueIndex(a.atoms[1].Eval(p)));
        q.tag = static_cast<uint16_t>(ValueIndex(a.atoms[2].Eval(p)));
        out.push_back(Send{q, a.target});
        break;
      }
      case CompiledAction::Kind::kAssign: {
        bool b = EvalCond(ctx, a.cond, state, p);
        ValueCode values[4];
        for (size_t i = 0; i < a.atoms.size(); ++i) values[i] = a.atoms[i].Eval(p);
        state.Assign(ctx, a.target, values, b, p);
        break;
      }
      case CompiledAction::Kind::kAbort:
        state.SetErr();
        break;
      case CompiledAction::Kind::kSkip:
        break;
    }
  }
}

// Calls sink(state, emission) once per enabled leaf, or once with the
// unchanged state and no emission when the packet is dropped. Duplicates are
// left to the caller.
template <class Model, class Sink>
void ExecuteStep(const StepContext& ctx, int channel, const Packet& p,
                 const Model& initial, Sink&& sink) {
  if (initial.err()) {
    sink(initial, Emission{});
    return;
  }
  bool enabled = false;
  if (channel >= 0 && channel < static_cast<int>(ctx.program.leaves.size())) {
    for (const CompiledLeaf& leaf : ctx.program.leaves[channel]) {
      if (!EvalCond(ctx, leaf.guard, initial, p)) continue;
      enabled = true;
      Model next = initial;
      Emission emission;
      RunActions(ctx, leaf, p, next, emission);
      sink(next, emission);
    }
  }
  if (!enabled) sink(initial, Emission{});
}

}  // namespace amdlv

#endif  // AMDLV_INTERPRETER_H_
