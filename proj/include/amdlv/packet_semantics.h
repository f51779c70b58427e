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

#ifndef AMDLV_PACKET_SEMANTICS_H_
#define AMDLV_PACKET_SEMANTICS_H_

#include <array>
#include <vector>

#include "amdlv/interpreter.h"
#include "amdlv/packet.h"
#include "amdlv/program.h"
#include "amdlv/relation_semantics.h"

namespace amdlv {

// Middlebox state as one query-valuation row per packet, or err.
struct PacketEffectState {
  bool is_err = false;
  std::vector<Row> rows;

  static PacketEffectState Initial(const PacketSpace& space);

  bool err() const { return is_err; }
  bool Member(const StepContext& ctx, int query, const Packet& p) const;
  void Assign(const StepContext& ctx, int relation, const ValueCode* values,
              bool b, const Packet& p);
  void SetErr();

  friend bool operator==(const PacketEffectState&,
                         const PacketEffectState&) = default;
  friend auto operator<=>(const PacketEffectState&,
                          const PacketEffectState&) = default;
};

struct PacketOutcome {
  PacketEffectState state;
  Emission emission;

  friend bool operator==(const PacketOutcome&, const PacketOutcome&) = default;
  friend auto operator<=>(const PacketOutcome&, const PacketOutcome&) = default;
};

// The bisimulation witness: row p~ holds atoms(q)(p~) in s(rel(q)).
PacketEffectState PsOf(const CompiledProgram& program, const PacketSpace& space,
                       const RelationState& state);

// Sets entry (p~, q) to b wherever rel(q) = relation and atoms(q)(p~) equals
// the assigned tuple evaluated on the input packet.
PacketEffectState Update(const CompiledProgram& program,
                         const PacketSpace& space,
                         const PacketEffectState& state, int relation,
                         const std::vector<CompiledAtom>& tuple, bool b,
                         const Packet& input);

std::vector<PacketOutcome> StepPacket(const CompiledProgram& program,
                                      const PacketSpace& space,
                                      const PacketEffectState& state,
                                      const Packet& p, int channel);

// True iff the two outcome sets agree under PsOf. Requires
// PsOf(s) == s~ (both err counts).
bool CheckBisimulation(const CompiledProgram& program,
                       const PacketSpace& space, const RelationState& s,
                       const PacketEffectState& s_tilde, const Packet& p,
                       int channel);

// The rows of a packet-effect state restricted to {input, companion}. When
// the two packets coincide only `input_row` is meaningful.
struct Substate {
  Packet input;
  Packet companion;
  Row input_row = 0;
  Row companion_row = 0;
  bool is_err = false;

  bool diagonal() const { return input == companion; }

  bool err() const { return is_err; }
  bool Member(const StepContext& ctx, int query, const Packet& p) const;
  void Assign(const StepContext& ctx, int relation, const ValueCode* values,
              bool b, const Packet& p);
  void SetErr();

  friend bool operator==(const Substate&, const Substate&) = default;
  friend auto operator<=>(const Substate&, const Substate&) = default;
};

struct SubstateOutcome {
  Substate sub;
  Emission emission;

  friend bool operator==(const SubstateOutcome&,
                         const SubstateOutcome&) = default;
  friend auto operator<=>(const SubstateOutcome&,
                          const SubstateOutcome&) = default;
};

Substate MakeSubstate(const Packet& input, Row input_row,
                      const Packet& companion, Row companion_row);

// Steps the pair directly from the program, reading only the input row.
std::vector<SubstateOutcome> SubstateStep(const CompiledProgram& program,
                                          const Substate& sub, int channel);

// One relation assignment observed while stepping a single row.
struct Event {
  int relation = -1;
  bool value = false;
  uint8_t arity = 0;
  std::array<ValueCode, 4> values{};

  friend bool operator==(const Event&, const Event&) = default;
  friend auto operator<=>(const Event&, const Event&) = default;
};

// Steps only the input row, logging assignments so that their effect on any
// companion row can be replayed afterwards.
struct RowKernel {
  Row row = 0;
  bool is_err = false;
  std::vector<Event> events;

  bool err() const { return is_err; }
  bool Member(const StepContext& ctx, int query, const Packet& p) const;
  void Assign(const StepContext& ctx, int relation, const ValueCode* values,
              bool b, const Packet& p);
  void SetErr() { is_err = true; }
};

struct KernelOutcome {
  Row row = 0;
  bool is_err = false;
  std::vector<Event> events;
  Emission emission;
};

std::vector<KernelOutcome> StepRow(const CompiledProgram& program,
                                   const Packet& p, Row row, int channel);

// Replays an event log on the row of `companion`.
Row ApplyEvents(const CompiledProgram& program, const std::vector<Event>& events,
                const Packet& companion, Row row);

// True iff some event of the log can change some row of `companion`.
bool EventsTouch(const CompiledProgram& program,
                 const std::vector<Event>& events, const Packet& companion);

}  // namespace amdlv

#endif  // AMDLV_PACKET_SEMANTICS_H_
