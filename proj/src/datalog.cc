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


#include "amdlv/datalog.h"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "amdlv/version.h"

namespace amdlv {
namespace {

// Terms 0..2 are the input packet fields, 3..5 the companion fields; larger
// ids are constants.
constexpr int kCompanionBase = 3;
constexpr int kFirstConstant = 6;
const char* const kFieldVars[kFirstConstant] = {"s", "d", "t", "s2", "d2", "t2"};

struct SendOut {
  int channel;
  int terms[kPacketArity];
};

struct AssignOut {
  int relation;
  std::vector<int> terms;
  bool value;
};

// One run of a leaf under a fixed script of case-split decisions.
class PathRunner {
 public:
  // Without `match`, assignments are recorded but leave the rows alone.
  PathRunner(const CompiledProgram& program, bool diagonal, int seed_field,
             bool match, std::vector<char>& script)
      : program_(program), diagonal_(diagonal), match_(match), script_(script) {
    for (int t = 0; t < kFirstConstant; ++t) {
      parent_.push_back(t);
      value_.push_back(std::nullopt);
    }
    int q = program.query_count();
    orig_bit.assign(q, std::nullopt);
    cur_bit.assign(q, std::nullopt);
    comp_bit.assign(q, std::nullopt);
    if (seed_field >= 0) {
      diseq_.emplace_back(seed_field, kCompanionBase + seed_field);
    }
  }

  void Run(const CompiledLeaf& leaf) {
    enabled = Cond(leaf.guard);
    if (!enabled) return;
    for (const CompiledAction& a : leaf.actions) {
      switch (a.kind) {
        case CompiledAction::Kind::kSend: {
          SendOut s{a.target, {}};
          for (int i = 0; i < kPacketArity; ++i) s.terms[i] = Term(a.atoms[i], false);
          sends.push_back(s);
          break;
        }
        case CompiledAction::Kind::kAssign:
          Assign(a);
          break;
        case CompiledAction::Kind::kAbort:
          aborted = true;
          return;
        case CompiledAction::Kind::kSkip:
          break;
      }
    }
  }

  int Find(int t) const {
    while (parent_[t] != t) t = parent_[t];
    return t;
  }

  std::optional<ValueCode> ValueOf(int t) const { return value_[Find(t)]; }

  // Smallest field term in the class of t, or -1.
  int FieldOf(int t) const {
    int r = Find(t);
    for (int f = 0; f < kFirstConstant; ++f) {
      if (Find(f) == r) return f;
    }
    return -1;
  }

  bool IsTag(int t) const {
    if (t < kFirstConstant) return t % kCompanionBase == kFieldTag;
    return IsTagValue(*value_[t]);
  }

  const std::vector<std::pair<int, int>>& diseq() const { return diseq_; }

  bool enabled = false;
  bool aborted = false;
  std::vector<std::optional<bool>> orig_bit;
  std::vector<std::optional<bool>> cur_bit;
  std::vector<std::optional<bool>> comp_bit;
  std::vector<SendOut> sends;
  std::vector<AssignOut> assigns;

 private:
  bool Decide() {
    if (pos_ < script_.size()) return script_[pos_++] != 0;
    script_.push_back(0);
    ++pos_;
    return false;
  }

  int Constant(ValueCode v) {
    auto [it, inserted] = constants_.emplace(v, static_cast<int>(parent_.size()));
    if (inserted) {
      parent_.push_back(it->second);
      value_.push_back(v);
    }
    return it->second;
  }

  int Term(const CompiledAtom& a, bool companion) {
    if (a.field < 0) return Constant(a.value);
    if (companion && !diagonal_) return kCompanionBase + a.field;
    return a.field;
  }

  bool Equal(int a, int b) {
    int ra = Find(a);
    int rb = Find(b);
    if (ra == rb) return true;
    if (IsTag(a) != IsTag(b)) return false;
    if (value_[ra] && value_[rb]) return *value_[ra] == *value_[rb];
    for (const auto& [x, y] : diseq_) {
      int rx = Find(x);
      int ry = Find(y);
      if ((rx == ra && ry == rb) || (rx == rb && ry == ra)) return false;
    }
    if (Decide()) {
      if (!value_[ra]) {
        parent_[ra] = rb;
      } else {
        parent_[rb] = ra;
      }
      return true;
    }
    diseq_.emplace_back(ra, rb);
    return false;
  }

  bool Member(int q) {
    if (!cur_bit[q]) {
      bool v = Decide();
      orig_bit[q] = v;
      cur_bit[q] = v;
    }
    return *cur_bit[q];
  }

  bool Cond(int node) {
    const CompiledCond& c = program_.conds[node];
    switch (c.op) {
      case CompiledCond::Op::kTrue:
        return true;
      case CompiledCond::Op::kFalse:
        return false;
      case CompiledCond::Op::kAnd:
        return Cond(c.lhs) && Cond(c.rhs);
      case CompiledCond::Op::kNot:
        return !Cond(c.lhs);
      case CompiledCond::Op::kEq:
        return Equal(Term(c.a, false), Term(c.b, false));
      case CompiledCond::Op::kMember:
        return Member(c.query);
    }
    return false;
  }

  bool Matches(const CompiledQuery& q, const std::vector<int>& tuple,
               bool companion) {
    for (size_t i = 0; i < q.atoms.size(); ++i) {
      if (!Equal(Term(q.atoms[i], companion), tuple[i])) return false;
    }
    return true;
  }

  void Assign(const CompiledAction& a) {
    bool b = Cond(a.cond);
    AssignOut out{a.target, {}, b};
    for (const CompiledAtom& atom : a.atoms) out.terms.push_back(Term(atom, false));
    if (!match_) {
      assigns.push_back(std::move(out));
      return;
    }
    for (int q : program_.queries_of_relation[a.target]) {
      const CompiledQuery& query = program_.queries[q];
      if (Matches(query, out.terms, false)) cur_bit[q] = b;
      if (!diagonal_ && Matches(query, out.terms, true)) comp_bit[q] = b;
    }
    assigns.push_back(std::move(out));
  }

  const CompiledProgram& program_;
  bool diagonal_;
  bool match_;
  std::vector<char>& script_;
  size_t pos_ = 0;
  std::vector<int> parent_;
  std::vector<std::optional<ValueCode>> value_;
  std::map<ValueCode, int> constants_;
  std::vector<std::pair<int, int>> diseq_;
};

// Runs `fn` once for every complete decision script of the leaf.
template <class Fn>
void ForEachPath(const CompiledProgram& program, const CompiledLeaf& leaf,
                 bool diagonal, int seed_field, bool match, Fn&& fn) {
  std::vector<char> script;
  while (true) {
    PathRunner runner(program, diagonal, seed_field, match, script);
    runner.Run(leaf);
    fn(runner);
    while (!script.empty() && script.back() != 0) script.pop_back();
    if (script.empty()) return;
    script.back() = 1;
  }
}

std::string Mangle(const std::string& name) {
  std::string out;
  for (char ch : name) {
    bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
              (ch >= '0' && ch <= '9') || ch == '_';
    out += ok ? ch : '_';
  }
  if (out.empty() || (out[0] >= '0' && out[0] <= '9')) out = "r_" + out;
  return out;
}

bool Reserved(const std::string& name) {
  static const char* const kExact[] = {"abort", "aborted", "host", "tag",
                                       "eq_host", "eq_tag"};
  static const char* const kPrefix[] = {"packetSeen_", "NeighborHostPackets_",
                                        "abstract_state_", "mbox_"};
  for (const char* e : kExact) {
    if (name == e) return true;
  }
  for (const char* p : kPrefix) {
    if (name.rfind(p, 0) == 0) return true;
  }
  return false;
}

class Emitter {
 public:
  Emitter(const Topology& topology, DatalogDialect dialect)
      : topo_(topology), dialect_(dialect) {}

  std::string Run() {
    NamePrograms();
    NameViews();
    Section("Domains");
    for (const Host& h : topo_.hosts) Fact("host", {"host"}, {Quote(h.id)});
    for (const std::string& t : topo_.tags) Fact("tag", {"tag"}, {Quote(t)});
    Section("Equality with polarity");
    for (const Host& a : topo_.hosts) {
      for (const Host& b : topo_.hosts) {
        Fact("eq_host", {"x", "y", "b"},
             {Quote(a.id), Quote(b.id), Bool(a.id == b.id)}, 1);
      }
    }
    for (const std::string& a : topo_.tags) {
      for (const std::string& b : topo_.tags) {
        Fact("eq_tag", {"x", "y", "b"}, {Quote(a), Quote(b), Bool(a == b)}, 1);
      }
    }
    if (!topo_.middleboxes.empty()) {
      Section("Middleboxes");
      for (const MiddleboxInstance& m : topo_.middleboxes) {
        Fact("mbox_" + program_name_.at(m.program_path), {"this"},
             {Quote(m.id)});
      }
    }
    Section("Host packets");
    std::vector<int> host_channels;
    for (const Host& h : topo_.hosts) {
      for (int e : h.egress) {
        host_channels.push_back(e);
        for (PacketId id : h.sendable) {
          Packet p = topo_.space.At(id);
          Fact(Neighbor(e), {"s", "d", "t"},
               {Quote(topo_.hosts[p.src].id), Quote(topo_.hosts[p.dst].id),
                Quote(topo_.tags[p.tag])});
        }
      }
    }
    std::sort(host_channels.begin(), host_channels.end());
    if (!host_channels.empty()) Section("Channels");
    for (int e : host_channels) {
      Rule(Atom(Seen(e), {"s", "d", "t"}), {Atom(Neighbor(e), {"s", "d", "t"})});
    }
    if (!topo_.middleboxes.empty()) {
      Section("State initialization");
      std::set<std::string> done;
      for (const MiddleboxInstance& m : topo_.middleboxes) {
        const std::string& name = program_name_.at(m.program_path);
        if (!done.insert(name).second) continue;
        std::vector<std::string> args{"this", "s", "d", "t"};
        for (int q = 0; q < m.program.query_count(); ++q) args.push_back(Bool(false));
        Rule(Atom(StateRel(m), args),
             {Atom("mbox_" + name, {"this"}), Atom("host", {"s"}),
              Atom("host", {"d"}), Atom("tag", {"t"})});
      }
      Section("Abort");
      Declare("aborted", {"this"}, 0);
      Declare("abort", {}, 0);
      rules_.push_back(Atom("abort", {}) + " :- aborted(m).");
      for (size_t m = 0; m < topo_.middleboxes.size(); ++m) Middlebox(m);
    }
    Flush();
    return Header() + Declarations() + body_;
  }

 private:
  struct Decl {
    std::vector<std::string> columns;
    // Leading symbol columns; the rest are numbers in the souffle dialect.
    size_t symbols;
  };

  void NamePrograms() {
    std::map<std::string, std::string> owner;
    for (const MiddleboxInstance& m : topo_.middleboxes) {
      if (program_name_.count(m.program_path)) continue;
      std::string base = Mangle(m.program.name);
      std::string name = base;
      for (int k = 2; owner.count(name); ++k) name = base + "_" + std::to_string(k);
      owner[name] = m.program_path;
      program_name_[m.program_path] = name;
    }
  }

  void NameViews() {
    std::map<std::string, int> uses;
    for (const MiddleboxInstance& m : topo_.middleboxes) {
      for (const CompiledRelation& r : m.program.relations) ++uses[r.name];
    }
    for (const MiddleboxInstance& m : topo_.middleboxes) {
      std::vector<std::string> names;
      for (const CompiledRelation& r : m.program.relations) {
        std::string name =
            Mangle(uses[r.name] == 1 ? r.name : r.name + "_" + m.id);
        if (Reserved(name)) name += "_v";
        names.push_back(name);
      }
      view_names_.push_back(std::move(names));
    }
  }

  bool souffle() const { return dialect_ == DatalogDialect::kSouffle; }

  std::string Bool(bool b) const {
    if (souffle()) return b ? "1" : "0";
    return b ? "true" : "false";
  }

  static std::string Quote(const std::string& s) { return "\"" + s + "\""; }

  static std::string Seen(int e) { return "packetSeen_" + std::to_string(e); }
  static std::string Neighbor(int e) {
    return "NeighborHostPackets_" + std::to_string(e);
  }
  std::string StateRel(const MiddleboxInstance& m) const {
    return "abstract_state_" + program_name_.at(m.program_path);
  }

  std::string Atom(const std::string& rel,
                   const std::vector<std::string>& args) const {
    if (args.empty()) return souffle() ? rel + "()" : rel;
    std::string out = rel + "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i > 0) out += ",";
      out += args[i];
    }
    return out + ")";
  }

  void Declare(const std::string& rel, const std::vector<std::string>& columns,
               size_t numbers) {
    if (decls_.count(rel)) return;
    decls_[rel] = Decl{columns, columns.size() - numbers};
    decl_order_.push_back(rel);
  }

  void Section(const std::string& title) {
    Flush();
    pending_title_ = title;
  }

  void Flush() {
    if (!rules_.empty()) {
      if (!pending_title_.empty()) body_ += "\n// " + pending_title_ + "\n";
      body_ += Joined(rules_);
    }
    rules_.clear();
    pending_title_.clear();
  }

  static std::string Joined(const std::vector<std::string>& lines) {
    std::string out;
    for (const std::string& l : lines) out += l + "\n";
    return out;
  }

  void Fact(const std::string& rel, const std::vector<std::string>& columns,
            const std::vector<std::string>& args, size_t numbers = 0) {
    Declare(rel, columns, numbers);
    rules_.push_back(Atom(rel, args) + ".");
  }

  void Rule(const std::string& head, const std::vector<std::string>& body) {
    std::string line = head + " :- ";
    std::set<std::string> used;
    for (const std::string& atom : body) {
      if (!used.insert(atom).second) continue;
      if (used.size() > 1) line += ", ";
      line += atom;
    }
    line += ".";
    if (seen_rules_.insert(line).second) rules_.push_back(line);
  }

  std::string Header() const {
    return "// amdlv " + std::string(kVersion) + "\n// topology " +
           TopologyHash(topo_) + "\n// dialect " + DialectName(dialect_) + "\n";
  }

  std::string Declarations() const {
    if (!souffle()) return "";
    std::string out = "\n";
    for (const std::string& rel : decl_order_) {
      const Decl& d = decls_.at(rel);
      out += ".decl " + rel + "(";
      for (size_t i = 0; i < d.columns.size(); ++i) {
        if (i > 0) out += ", ";
        out += d.columns[i] + (i < d.symbols ? ":symbol" : ":number");
      }
      out += ")\n";
    }
    out += ".output abort\n";
    return out;
  }

  std::string Render(const PathRunner& r, int term) const {
    if (std::optional<ValueCode> v = r.ValueOf(term)) {
      return Quote(topo_.ValueName(*v));
    }
    return kFieldVars[r.FieldOf(term)];
  }

  std::string Bits(const std::vector<std::optional<bool>>& bits,
                   const char* var) const {
    std::string out;
    for (size_t q = 0; q < bits.size(); ++q) {
      out += ",";
      out += bits[q] ? Bool(*bits[q]) : var + std::to_string(q);
    }
    return out;
  }

  std::string StateAtom(const MiddleboxInstance& m, const PathRunner& r,
                        int base, const std::vector<std::optional<bool>>& bits,
                        const char* var) const {
    return StateRel(m) + "(" + Quote(m.id) + "," + Render(r, base) + "," +
           Render(r, base + 1) + "," + Render(r, base + 2) + Bits(bits, var) +
           ")";
  }

  std::vector<std::string> Body(const MiddleboxInstance& m, int ingress,
                                const PathRunner& r, bool need_state,
                                bool companion) const {
    std::vector<std::string> body;
    body.push_back(Seen(ingress) + "(" + Render(r, 0) + "," + Render(r, 1) +
                   "," + Render(r, 2) + ")");
    bool constrained = false;
    for (const auto& b : r.orig_bit) constrained = constrained || b.has_value();
    if (need_state || constrained) {
      body.push_back(StateAtom(m, r, 0, r.orig_bit, "b"));
    }
    if (companion) {
      std::vector<std::optional<bool>> free(r.comp_bit.size());
      body.push_back(StateAtom(m, r, kCompanionBase, free, "c"));
    }
    for (const auto& [a, b] : r.diseq()) {
      body.push_back(std::string(r.IsTag(a) ? "eq_tag" : "eq_host") + "(" +
                     Render(r, a) + "," + Render(r, b) + "," + Bool(false) +
                     ")");
    }
    return body;
  }

  void Middlebox(size_t mi) {
    const MiddleboxInstance& m = topo_.middleboxes[mi];
    const CompiledProgram& prog = m.program;
    int width = prog.query_count();
    std::vector<std::string> state_cols{"this", "s", "d", "t"};
    for (int q = 0; q < width; ++q) state_cols.push_back("b" + std::to_string(q));
    Declare(StateRel(m), state_cols, width);
    Section("Middlebox " + m.id + " (" + prog.name + ")");
    for (size_t c = 0; c < prog.channels.size(); ++c) {
      int ingress = m.ingress[c];
      if (ingress < 0) continue;
      Declare(Seen(ingress), {"s", "d", "t"}, 0);
      for (const CompiledLeaf& leaf : prog.leaves[c]) {
        ForEachPath(prog, leaf, true, -1, false, [&](const PathRunner& r) {
          if (r.enabled) Effects(m, mi, ingress, r);
        });
        ForEachPath(prog, leaf, true, -1, true, [&](const PathRunner& r) {
          if (r.enabled && !r.aborted) Diagonal(m, ingress, r);
        });
        for (int f = 0; f < kPacketArity; ++f) {
          ForEachPath(prog, leaf, false, f, true, [&](const PathRunner& r) {
            if (!r.enabled || r.aborted) return;
            bool touched = false;
            for (const auto& b : r.comp_bit) touched = touched || b.has_value();
            if (!touched) return;
            std::string head = StateAtom(m, r, kCompanionBase, r.comp_bit, "c");
            Rule(head, Body(m, ingress, r, false, true));
          });
        }
      }
    }
  }

  // Sends and aborts depend on the guard only; relation views are recorded
  // for every assignment of a non-aborting path.
  void Effects(const MiddleboxInstance& m, size_t mi, int ingress,
               const PathRunner& r) {
    std::vector<std::string> body = Body(m, ingress, r, false, false);
    for (const SendOut& s : r.sends) {
      int e = m.egress[s.channel];
      Declare(Seen(e), {"s", "d", "t"}, 0);
      Rule(Seen(e) + "(" + Render(r, s.terms[0]) + "," + Render(r, s.terms[1]) +
               "," + Render(r, s.terms[2]) + ")",
           body);
    }
    if (r.aborted) {
      Rule("aborted(" + Quote(m.id) + ")", body);
      return;
    }
    for (const AssignOut& a : r.assigns) {
      const CompiledRelation& rel = m.program.relations[a.relation];
      const std::string& name = view_names_[mi][a.relation];
      std::vector<std::string> cols;
      for (size_t i = 0; i < rel.sorts.size(); ++i) {
        cols.push_back("x" + std::to_string(i));
      }
      cols.push_back("b");
      Declare(name, cols, 1);
      std::vector<std::string> args;
      for (int t : a.terms) args.push_back(Render(r, t));
      args.push_back(Bool(a.value));
      Rule(Atom(name, args), body);
    }
  }

  void Diagonal(const MiddleboxInstance& m, int ingress, const PathRunner& r) {
    bool changed = false;
    bool uses_vars = false;
    for (size_t q = 0; q < r.cur_bit.size(); ++q) {
      if (r.cur_bit[q] != r.orig_bit[q]) changed = true;
      if (!r.cur_bit[q]) uses_vars = true;
    }
    if (changed) {
      Rule(StateAtom(m, r, 0, r.cur_bit, "b"),
           Body(m, ingress, r, uses_vars, false));
    }
  }

  const Topology& topo_;
  DatalogDialect dialect_;
  std::map<std::string, std::string> program_name_;
  std::vector<std::vector<std::string>> view_names_;
  std::map<std::string, Decl> decls_;
  std::vector<std::string> decl_order_;
  std::string body_;
  std::string pending_title_;
  std::vector<std::string> rules_;
  std::unordered_set<std::string> seen_rules_;
};

}  // namespace

bool ParseDialect(const std::string& text, DatalogDialect* out) {
  if (text == "generic") {
    *out = DatalogDialect::kGeneric;
  } else if (text == "souffle") {
    *out = DatalogDialect::kSouffle;
  } else {
    return false;
  }
  return true;
}

const char* DialectName(DatalogDialect dialect) {
  return dialect == DatalogDialect::kSouffle ? "souffle" : "generic";
}

std::string EmitDatalog(const Topology& topology, DatalogDialect dialect) {
  return Emitter(topology, dialect).Run();
}

}  // namespace amdlv
