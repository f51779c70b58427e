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

#include "support/random_program.h"

#include <deque>
#include <random>
#include <set>
#include <sstream>

#include "amdlv/amdl.h"

namespace amdlv::testing {
namespace {

struct Relation {
  std::string name;
  std::vector<Sort> sorts;
};

class Generator {
 public:
  explicit Generator(uint64_t seed) : rng_(seed) {}

  std::string Program() {
    int n = Pick(2) + 1;
    for (int i = 0; i < n; ++i) {
      Relation r{"r" + std::to_string(i), {Sort::kHost}};
      int shape = Pick(3);
      if (shape == 1) r.sorts.push_back(Sort::kTag);
      if (shape == 2) r.sorts.push_back(Sort::kHost);
      relations_.push_back(r);
    }
    int queries = Pick(3) + 1;
    std::set<std::string> seen;
    for (int i = 0; i < queries * 4 && static_cast<int>(queries_.size()) < queries;
         ++i) {
      const Relation& r = relations_[Pick(relations_.size())];
      std::string q = Tuple(r) + " in " + r.name;
      if (seen.insert(q).second) queries_.push_back(q);
    }
    std::ostringstream out;
    for (const Relation& r : relations_) {
      out << "relation " << r.name << "(";
      for (size_t i = 0; i < r.sorts.size(); ++i) {
        out << (i ? ", " : "") << SortName(r.sorts[i]);
      }
      out << ")\n";
    }
    out << "gen = do\n   left ? p => " << Command(2) << "\n";
    if (Pick(4) != 0) out << "[] right ? p => " << Command(2) << "\n";
    if (Pick(4) == 0) out << "[] left ? p => " << Command(1) << "\n";
    out << "od\n";
    return out.str();
  }

 private:
  size_t Pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }

  std::string Host() {
    static const char* kHosts[] = {"p.src", "p.dst", "p.src", "p.dst", "a", "b"};
    return kHosts[Pick(6)];
  }

  std::string Tag() {
    static const char* kTags[] = {"p.type", "p.type", "0", "1"};
    return kTags[Pick(4)];
  }

  std::string Value(Sort s) { return s == Sort::kHost ? Host() : Tag(); }

  std::string Tuple(const Relation& r) {
    if (r.sorts.size() == 1) return Value(r.sorts[0]);
    std::string out = "(";
    for (size_t i = 0; i < r.sorts.size(); ++i) {
      out += (i ? ", " : "") + Value(r.sorts[i]);
    }
    return out + ")";
  }

  std::string Cond(int depth) {
    size_t k = Pick(depth > 0 ? 7 : 4);
    switch (k) {
      case 0:
        return Pick(5) == 0 ? "false" : "true";
      case 1:
        return Pick(2) ? Host() + " = " + Host() : Tag() + " = " + Tag();
      case 2:
      case 3:
        return queries_[Pick(queries_.size())];
      case 4:
        return "not " + Paren(Cond(depth - 1));
      default:
        return Paren(Cond(depth - 1)) + " and " + Paren(Cond(depth - 1));
    }
  }

  static std::string Paren(const std::string& c) { return "(" + c + ")"; }

  std::string Action() {
    switch (Pick(9)) {
      case 0:
        return "skip";
      case 1:
        return "abort";
      case 2:
      case 3:
        return std::string(Pick(2) ? "right" : "left") + " ! p";
      case 4:
        return std::string(Pick(2) ? "right" : "left") + " ! (" + Host() + ", " +
               Host() + ", " + Tag() + ")";
      default: {
        const Relation& r = relations_[Pick(relations_.size())];
        std::string target = r.name + "(";
        for (size_t i = 0; i < r.sorts.size(); ++i) {
          target += (i ? ", " : "") + Value(r.sorts[i]);
        }
        std::string value = Pick(3) == 0 ? Cond(1) : (Pick(2) ? "true" : "false");
        return target + ") := " + value;
      }
    }
  }

  std::string Leaf() {
    std::string out = Cond(2) + " => " + Action();
    int extra = static_cast<int>(Pick(3));
    for (int i = 0; i < extra; ++i) out += "; " + Action();
    return out;
  }

  std::string Command(int depth) {
    if (depth == 0 || Pick(3) == 0) return Leaf();
    std::string out = "if " + Alternative(depth - 1);
    int n = static_cast<int>(Pick(3)) + 1;
    for (int i = 0; i < n; ++i) out += " [] " + Alternative(depth - 1);
    return out + " fi";
  }

  std::string Alternative(int depth) {
    if (depth > 0 && Pick(4) == 0) return Command(depth);
    return Leaf();
  }

  std::mt19937_64 rng_;
  std::vector<Relation> relations_;
  std::vector<std::string> queries_;
};

}  // namespace

PacketSpace SmallSpace() { return PacketSpace(2, 2); }

ConstantResolver SmallResolver() {
  return [](const std::string& name) -> std::optional<ValueCode> {
    if (name == "a") return HostValue(0);
    if (name == "b") return HostValue(1);
    if (name == "0") return TagValue(0);
    if (name == "1") return TagValue(1);
    return std::nullopt;
  };
}

std::string RandomAmdl(uint64_t seed) { return Generator(seed).Program(); }

RandomProgram MakeRandomProgram(uint64_t seed) {
  RandomProgram out;
  out.seed = seed;
  out.text = RandomAmdl(seed);
  out.parsed = ParseAmdl(out.text);
  out.program = CompileProgram(MergePacketBlocks(out.parsed), SmallResolver());
  return out;
}

std::vector<RelationState> ReachableRelationStates(
    const CompiledProgram& program, const PacketSpace& space, size_t limit) {
  std::set<RelationState> seen;
  std::deque<RelationState> work;
  RelationState init = RelationState::Initial(program);
  seen.insert(init);
  work.push_back(init);
  std::vector<RelationState> out;
  while (!work.empty() && out.size() < limit) {
    RelationState s = work.front();
    work.pop_front();
    out.push_back(s);
    for (const Packet& p : space.Enumerate()) {
      for (size_t c = 0; c < program.channels.size(); ++c) {
        for (const RelationOutcome& o :
             StepRelation(program, s, p, static_cast<int>(c))) {
          if (seen.insert(o.state).second) work.push_back(o.state);
        }
      }
    }
  }
  return out;
}

}  // namespace amdlv::testing
