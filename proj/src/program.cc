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

#include "amdlv/program.h"

#include <string>
#include <utility>
#include <vector>

#include "amdlv/error.h"

namespace amdlv {
namespace {

class Compiler {
 public:
  Compiler(const MiddleboxProgram& src, const ConstantResolver& resolve)
      : src_(src), resolve_(resolve) {}

  CompiledProgram Run() {
    out_.name = src_.name;
    out_.channels = src_.channel_names;
    out_.leaves.resize(out_.channels.size());
    sorts_.resize(src_.relations.size());
    for (size_t r = 0; r < src_.relations.size(); ++r) {
      sorts_[r] = src_.relations[r].sorts;
    }
    for (const Query& q : src_.queries) {
      CompiledQuery cq;
      cq.relation = Relation(q.relation, q.atoms, SourcePos{});
      for (const Atom& a : q.atoms) cq.atoms.push_back(Resolve(a));
      out_.queries.push_back(std::move(cq));
    }
    if (out_.queries.size() > static_cast<size_t>(kMaxQueries)) {
      throw Error(ErrorKind::kValidation,
                  "program '" + src_.name + "' has more than 63 queries");
    }
    for (const PacketBlock& b : src_.blocks) {
      int channel = out_.FindChannel(b.channel);
      Flatten(b.body, out_.leaves[channel]);
    }
    for (size_t r = 0; r < src_.relations.size(); ++r) {
      CompiledRelation rel;
      rel.name = src_.relations[r].name;
      for (const auto& s : sorts_[r]) rel.sorts.push_back(s.value_or(Sort::kHost));
      out_.relations.push_back(std::move(rel));
    }
    out_.queries_of_relation.resize(out_.relations.size());
    for (size_t q = 0; q < out_.queries.size(); ++q) {
      out_.queries_of_relation[out_.queries[q].relation].push_back(
          static_cast<int>(q));
    }
    return std::move(out_);
  }

 private:
  CompiledAtom Resolve(const Atom& a) {
    CompiledAtom c;
    if (a.is_field()) {
      c.field = static_cast<int8_t>(a.field);
      return c;
    }
    std::optional<ValueCode> v = resolve_(a.constant);
    if (!v) {
      throw Error(ErrorKind::kUnresolvedConstant,
                  "'" + a.constant + "' in program '" + src_.name + "'",
                  a.pos.line, a.pos.column);
    }
    c.value = *v;
    return c;
  }

  static Sort SortOf(const CompiledAtom& a) {
    if (a.field >= 0) return FieldSort(a.field);
    return IsTagValue(a.value) ? Sort::kTag : Sort::kHost;
  }

  int Relation(const std::string& name, const std::vector<Atom>& atoms,
               SourcePos pos) {
    int r = src_.FindRelation(name);
    if (r < 0) {
      throw Error(ErrorKind::kUnknownRelation, "'" + name + "'", pos.line,
                  pos.column);
    }
    if (static_cast<int>(atoms.size()) != src_.relations[r].arity()) {
      throw Error(ErrorKind::kArity, "relation '" + name + "'", pos.line,
                  pos.column);
    }
    for (size_t i = 0; i < atoms.size(); ++i) {
      Sort s = SortOf(Resolve(atoms[i]));
      auto& slot = sorts_[r][i];
      if (!slot) {
        slot = s;
      } else if (*slot != s) {
        SourcePos at = atoms[i].pos;
        throw Error(ErrorKind::kSort,
                    "argument " + std::to_string(i + 1) + " of '" + name +
                        "' expects a " + SortName(*slot),
                    at.line, at.column);
      }
    }
    return r;
  }

  int Cond(const Condition& c) {
    CompiledCond n;
    switch (c.kind) {
      case Condition::Kind::kTrue:
        n.op = CompiledCond::Op::kTrue;
        break;
      case Condition::Kind::kFalse:
        n.op = CompiledCond::Op::kFalse;
        break;
      case Condition::Kind::kAnd:
        n.op = CompiledCond::Op::kAnd;
        n.lhs = Cond(c.operands[0]);
        n.rhs = Cond(c.operands[1]);
        break;
      case Condition::Kind::kNot:
        n.op = CompiledCond::Op::kNot;
        n.lhs = Cond(c.operands[0]);
        break;
      case Condition::Kind::kEq:
        n.op = CompiledCond::Op::kEq;
        n.a = Resolve(c.atoms[0]);
        n.b = Resolve(c.atoms[1]);
        if (SortOf(n.a) != SortOf(n.b)) {
          throw Error(ErrorKind::kSort, "comparison of a host and a tag",
                      c.pos.line, c.pos.column);
        }
        break;
      case Condition::Kind::kMember:
        n.op = CompiledCond::Op::kMember;
        n.query = c.query;
        Relation(c.relation, c.atoms, c.pos);
        break;
    }
    out_.conds.push_back(n);
    return static_cast<int>(out_.conds.size()) - 1;
  }

  void Flatten(const GuardedCommand& gc, std::vector<CompiledLeaf>& out) {
    if (gc.is_choice) {
      for (const GuardedCommand& alt : gc.alternatives) Flatten(alt, out);
      return;
    }
    CompiledLeaf leaf;
    leaf.guard = Cond(gc.guard);
    for (const Action& a : gc.actions) {
      CompiledAction ca;
      switch (a.kind) {
        case Action::Kind::kSend:
          ca.kind = CompiledAction::Kind::kSend;
          ca.target = out_.FindChannel(a.target);
          for (const Atom& atom : a.atoms) {
            ca.atoms.push_back(Resolve(atom));
          }
          if (SortOf(ca.atoms[0]) != Sort::kHost ||
              SortOf(ca.atoms[1]) != Sort::kHost ||
              SortOf(ca.atoms[2]) != Sort::kTag) {
            throw Error(ErrorKind::kSort, "sent packet is not (host, host, tag)",
                        a.pos.line, a.pos.column);
          }
          break;
        case Action::Kind::kAssign:
          ca.kind = CompiledAction::Kind::kAssign;
          ca.target = Relation(a.target, a.atoms, a.pos);
          for (const Atom& atom : a.atoms) ca.atoms.push_back(Resolve(atom));
          ca.cond = Cond(a.value);
          break;
        case Action::Kind::kAbort:
          ca.kind = CompiledAction::Kind::kAbort;
          break;
        case Action::Kind::kSkip:
          ca.kind = CompiledAction::Kind::kSkip;
          break;
      }
      leaf.actions.push_back(std::move(ca));
    }
    out.push_back(std::move(leaf));
  }

  const MiddleboxProgram& src_;
  const ConstantResolver& resolve_;
  std::vector<std::vector<std::optional<Sort>>> sorts_;
  CompiledProgram out_;
};

}  // namespace

int CompiledProgram::FindChannel(const std::string& name) const {
  for (size_t i = 0; i < channels.size(); ++i) {
    if (channels[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CompiledProgram CompileProgram(const MiddleboxProgram& program,
                               const ConstantResolver& resolve) {
  return Compiler(program, resolve).Run();
}

bool QueryMatches(const CompiledQuery& q, const Packet& p,
                  const ValueCode* values) {
  for (size_t i = 0; i < q.atoms.size(); ++i) {
    if (q.atoms[i].Eval(p) != values[i]) return false;
  }
  return true;
}

}  // namespace amdlv
