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

#ifndef AMDLV_PROGRAM_H_
#define AMDLV_PROGRAM_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "amdlv/ast.h"
#include "amdlv/packet.h"

namespace amdlv {

// An atom with its constant already resolved.
struct CompiledAtom {
  int8_t field = -1;
  ValueCode value = 0;

  ValueCode Eval(const Packet& p) const {
    return field >= 0 ? FieldValue(p, field) : value;
  }
};

struct CompiledCond {
  enum class Op : uint8_t { kTrue, kFalse, kAnd, kNot, kEq, kMember };

  Op op = Op::kTrue;
  int lhs = -1;
  int rhs = -1;
  CompiledAtom a;
  CompiledAtom b;
  int query = -1;
};

struct CompiledAction {
  enum class Kind : uint8_t { kSend, kAssign, kAbort, kSkip };

  Kind kind = Kind::kSkip;
  // Local channel for sends, relation index for assignments.
  int target = -1;
  std::vector<CompiledAtom> atoms;
  int cond = -1;
};

struct CompiledLeaf {
  int guard = -1;
  std::vector<CompiledAction> actions;
};

struct CompiledRelation {
  std::string name;
  std::vector<Sort> sorts;
};

struct CompiledQuery {
  int relation = -1;
  std::vector<CompiledAtom> atoms;
};

// A middlebox program bound to a topology's constants. Blocks reading the
// same channel contribute their leaves to one list; the leaves of nested
// choices are flattened since only leaves carry guards.
struct CompiledProgram {
  std::string name;
  std::vector<CompiledRelation> relations;
  std::vector<CompiledQuery> queries;
  std::vector<std::vector<int>> queries_of_relation;
  std::vector<std::string> channels;
  std::vector<std::vector<CompiledLeaf>> leaves;
  std::vector<CompiledCond> conds;

  int query_count() const { return static_cast<int>(queries.size()); }
  int FindChannel(const std::string& name) const;
};

// Maps a constant name to a value, or nullopt when unknown.
using ConstantResolver = std::function<std::optional<ValueCode>(const std::string&)>;

// Resolves constants and checks sorts. Throws amdlv::Error.
CompiledProgram CompileProgram(const MiddleboxProgram& program,
                               const ConstantResolver& resolve);

// True iff atoms(q)(p) equals `values`.
bool QueryMatches(const CompiledQuery& q, const Packet& p,
                  const ValueCode* values);

// Calls fn(packet) for every packet p of the space with atoms(q)(p) = values.
template <class Fn>
void ForEachMatchingPacket(const PacketSpace& space, const CompiledQuery& q,
                           const ValueCode* values, Fn&& fn) {
  int fixed[kPacketArity] = {-1, -1, -1};
  for (size_t i = 0; i < q.atoms.size(); ++i) {
    const CompiledAtom& a = q.atoms[i];
    if (a.field < 0) {
      if (a.value != values[i]) return;
      continue;
    }
    ValueCode v = values[i];
    if (IsTagValue(v) != (a.field == kFieldTag)) return;
    int idx = ValueIndex(v);
    int limit = a.field == kFieldTag ? space.tags() : space.hosts();
    if (idx >= limit) return;
    if (fixed[a.field] >= 0 && fixed[a.field] != idx) return;
    fixed[a.field] = idx;
  }
  int lo[kPacketArity];
  int hi[kPacketArity];
  for (int f = 0; f < kPacketArity; ++f) {
    int limit = f == kFieldTag ? space.tags() : space.hosts();
    lo[f] = fixed[f] >= 0 ? fixed[f] : 0;
    hi[f] = fixed[f] >= 0 ? fixed[f] + 1 : limit;
  }
  Packet p;
  for (int s = lo[0]; s < hi[0]; ++s) {
    p.src = static_cast<uint16_t>(s);
    for (int d = lo[1]; d < hi[1]; ++d) {
      p.dst = static_cast<uint16_t>(d);
      for (int t = lo[2]; t < hi[2]; ++t) {
        p.tag = static_cast<uint16_t>(t);
        fn(p);
      }
    }
  }
}

}  // namespace amdlv

#endif  // AMDLV_PROGRAM_H_
