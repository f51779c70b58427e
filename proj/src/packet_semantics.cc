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

#include "amdlv/packet_semantics.h"

#include <algorithm>
#include <tuple>
#include <vector>

namespace amdlv {
namespace {

inline Row SetBit(Row row, int q, bool b) {
  Row mask = Row{1} << q;
  return b ? (row | mask) : (row & ~mask);
}

template <class T>
void SortUnique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

PacketEffectState PacketEffectState::Initial(const PacketSpace& space) {
  PacketEffectState s;
  s.rows.assign(space.size(), 0);
  return s;
}

bool PacketEffectState::Member(const StepContext& ctx, int query,
                               const Packet& p) const {
  return (rows[ctx.space.Id(p)] >> query) & 1;
}

void PacketEffectState::Assign(const StepContext& ctx, int relation,
                               const ValueCode* values, bool b,
                               const Packet&) {
  for (int q : ctx.program.queries_of_relation[relation]) {
    ForEachMatchingPacket(ctx.space, ctx.program.queries[q], values,
                          [&](const Packet& t) {
                            Row& r = rows[ctx.space.Id(t)];
                            r = SetBit(r, q, b);
                          });
  }
}

void PacketEffectState::SetErr() {
  is_err = true;
  std::fill(rows.begin(), rows.end(), Row{0});
}

PacketEffectState PsOf(const CompiledProgram& program, const PacketSpace& space,
                       const RelationState& state) {
  PacketEffectState out = PacketEffectState::Initial(space);
  if (state.is_err) {
    out.is_err = true;
    return out;
  }
  PacketSpace none;
  StepContext ctx{program, none};
  for (PacketId id = 0; id < space.size(); ++id) {
    Packet p = space.At(id);
    Row row = 0;
    for (int q = 0; q < program.query_count(); ++q) {
      if (state.Member(ctx, q, p)) row |= Row{1} << q;
    }
    out.rows[id] = row;
  }
  return out;
}

PacketEffectState Update(const CompiledProgram& program,
                         const PacketSpace& space,
                         const PacketEffectState& state, int relation,
                         const std::vector<CompiledAtom>& tuple, bool b,
                         const Packet& input) {
  PacketEffectState out = state;
  ValueCode values[4];
  for (size_t i = 0; i < tuple.size(); ++i) values[i] = tuple[i].Eval(input);
  StepContext ctx{program, space};
  out.Assign(ctx, relation, values, b, input);
  return out;
}

std::vector<PacketOutcome> StepPacket(const CompiledProgram& program,
                                      const PacketSpace& space,
                                      const PacketEffectState& state,
                                      const Packet& p, int channel) {
  StepContext ctx{program, space};
  std::vector<PacketOutcome> out;
  ExecuteStep(ctx, channel, p, state,
              [&](const PacketEffectState& s, const Emission& e) {
                out.push_back(PacketOutcome{s, e});
              });
  SortUnique(out);
  return out;
}

bool CheckBisimulation(const CompiledProgram& program,
                       const PacketSpace& space, const RelationState& s,
                       const PacketEffectState& s_tilde, const Packet& p,
                       int channel) {
  std::vector<PacketOutcome> mapped;
  for (const RelationOutcome& o : StepRelation(program, s, p, channel)) {
    mapped.push_back(PacketOutcome{PsOf(program, space, o.state), o.emission});
  }
  SortUnique(mapped);
  return mapped == StepPacket(program, space, s_tilde, p, channel);
}

bool Substate::Member(const StepContext&, int query, const Packet&) const {
  return (input_row >> query) & 1;
}

void Substate::Assign(const StepContext& ctx, int relation,
                      const ValueCode* values, bool b, const Packet&) {
  for (int q : ctx.program.queries_of_relation[relation]) {
    const CompiledQuery& query = ctx.program.queries[q];
    if (QueryMatches(query, input, values)) input_row = SetBit(input_row, q, b);
    if (!diagonal() && QueryMatches(query, companion, values)) {
      companion_row = SetBit(companion_row, q, b);
    }
  }
  if (diagonal()) companion_row = input_row;
}

void Substate::SetErr() {
  is_err = true;
  input_row = 0;
  companion_row = 0;
}

Substate MakeSubstate(const Packet& input, Row input_row,
                      const Packet& companion, Row companion_row) {
  Substate s;
  s.input = input;
  s.companion = companion;
  s.input_row = input_row;
  s.companion_row = input == companion ? input_row : companion_row;
  return s;
}

std::vector<SubstateOutcome> SubstateStep(const CompiledProgram& program,
                                          const Substate& sub, int channel) {
  PacketSpace none;
  StepContext ctx{program, none};
  std::vector<SubstateOutcome> out;
  ExecuteStep(ctx, channel, sub.input, sub,
              [&](const Substate& s, const Emission& e) {
                out.push_back(SubstateOutcome{s, e});
              });
  SortUnique(out);
  return out;
}

bool RowKernel::Member(const StepContext&, int query, const Packet&) const {
  return (row >> query) & 1;
}

void RowKernel::Assign(const StepContext& ctx, int relation,
                       const ValueCode* values, bool b, const Packet& p) {
  Event ev;
  ev.relation = relation;
  ev.value = b;
  ev.arity = static_cast<uint8_t>(ctx.program.relations[relation].sorts.size());
  std::copy(values, values + ev.arity, ev.values.begin());
  events.push_back(ev);
  for (int q : ctx.program.queries_of_relation[relation]) {
    if (QueryMatches(ctx.program.queries[q], p, values)) row = SetBit(row, q, b);
  }
}

std::vector<KernelOutcome> StepRow(const CompiledProgram& program,
                                   const Packet& p, Row row, int channel) {
  PacketSpace none;
  StepContext ctx{program, none};
  RowKernel init;
  init.row = row;
  std::vector<KernelOutcome> out;
  ExecuteStep(ctx, channel, p, init, [&](const RowKernel& k, const Emission& e) {
    KernelOutcome o;
    o.is_err = k.is_err;
    o.emission = e;
    if (!k.is_err) {
      o.row = k.row;
      o.events = k.events;
    }
    for (const KernelOutcome& prev : out) {
      if (prev.is_err == o.is_err && prev.row == o.row &&
          prev.events == o.events && prev.emission == o.emission) {
        return;
      }
    }
    out.push_back(std::move(o));
  });
  return out;
}

Row ApplyEvents(const CompiledProgram& program, const std::vector<Event>& events,
                const Packet& companion, Row row) {
  for (const Event& ev : events) {
    for (int q : program.queries_of_relation[ev.relation]) {
      if (QueryMatches(program.queries[q], companion, ev.values.data())) {
        row = SetBit(row, q, ev.value);
      }
    }
  }
  return row;
}

bool EventsTouch(const CompiledProgram& program,
                 const std::vector<Event>& events, const Packet& companion) {
  for (const Event& ev : events) {
    for (int q : program.queries_of_relation[ev.relation]) {
      if (QueryMatches(program.queries[q], companion, ev.values.data())) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace amdlv
