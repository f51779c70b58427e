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

#include "amdlv/lfp.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "amdlv/packet_semantics.h"

namespace amdlv {
namespace {

struct RowKey {
  int mbox;
  PacketId packet;
  Row row;
  friend bool operator==(const RowKey&, const RowKey&) = default;
};

struct RowKeyHash {
  size_t operator()(const RowKey& k) const {
    uint64_t h = k.row * 0x9E3779B97F4A7C15ull;
    h ^= (static_cast<uint64_t>(k.mbox) << 40) ^ k.packet;
    h *= 0xBF58476D1CE4E5B9ull;
    return static_cast<size_t>(h ^ (h >> 31));
  }
};

struct Job {
  AbstractStep step;
  int local = -1;
};

// The assignments of one step outcome, shared by every step that produced
// the same log.
struct Effect {
  std::vector<Event> events;
  std::vector<PacketId> touched;
  AbstractStep first;
  bool multi = false;
  AbstractStep other;
};

struct Fact {
  bool is_row;
  int index;  // middlebox or channel
  PacketId packet;
  Row row;
};

class Engine {
 public:
  Engine(const Topology& topology, const LfpOptions& options)
      : topo_(topology),
        opts_(options),
        space_(topology.space),
        elem_(InitialElement(topology)),
        effects_(topology.middleboxes.size()),
        effect_index_(topology.middleboxes.size()),
        touching_(topology.middleboxes.size()),
        err_(topology.middleboxes.size(), false) {
    for (size_t m = 0; m < topo_.middleboxes.size(); ++m) {
      touching_[m].resize(space_.size());
    }
  }

  Verdict Run() {
    auto start = std::chrono::steady_clock::now();
    for (size_t e = 0; e < topo_.channels.size(); ++e) {
      for (PacketId p : elem_.Packets(static_cast<int>(e))) {
        queue_.push_back(Fact{false, static_cast<int>(e), p, 0});
      }
    }
    Verdict v;
    while (true) {
      Drain();
      if (jobs_.empty()) break;
      std::vector<Job> round;
      round.swap(jobs_);
      ++v.iterations;
      for (size_t begin = 0; begin < round.size(); begin += opts_.batch) {
        size_t end = std::min(round.size(), begin + opts_.batch);
        std::vector<std::vector<KernelOutcome>> results(end - begin);
        Evaluate(round, begin, end, results);
        for (size_t i = begin; i < end; ++i) {
          Integrate(round[i], results[i - begin]);
          ++v.steps;
          if (opts_.on_step) {
            Drain();
            opts_.on_step(round[i].step, elem_);
          }
        }
        Drain();
      }
    }
    for (size_t m = 0; m < err_.size(); ++m) {
      if (err_[m]) v.aborting.push_back(static_cast<int>(m));
    }
    v.unsafe = !v.aborting.empty();
    v.growth = growth_;
    if (v.unsafe && opts_.record_provenance) v.witness = Witness(v.aborting[0]);
    v.fixpoint = std::move(elem_);
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
    return v;
  }

 private:
  void Evaluate(const std::vector<Job>& round, size_t begin, size_t end,
                std::vector<std::vector<KernelOutcome>>& results) {
    auto work = [&](size_t lane, size_t lanes) {
      for (size_t i = begin + lane; i < end; i += lanes) {
        const Job& j = round[i];
        results[i - begin] =
            StepRow(topo_.middleboxes[j.step.mbox].program,
                    space_.At(j.step.packet), j.step.row, j.local);
      }
    };
    size_t lanes = static_cast<size_t>(std::max(1, opts_.threads));
    lanes = std::min(lanes, end - begin);
    if (lanes <= 1) {
      work(0, 1);
      return;
    }
    std::vector<std::thread> pool;
    for (size_t t = 1; t < lanes; ++t) pool.emplace_back(work, t, lanes);
    work(0, lanes);
    for (std::thread& t : pool) t.join();
  }

  void AddPacket(int channel, PacketId p, const Justification& why) {
    if (!elem_.AddPacket(channel, p)) return;
    ++growth_;
    if (opts_.record_provenance) {
      packet_why_[(static_cast<uint64_t>(channel) << 32) | p] = why;
    }
    queue_.push_back(Fact{false, channel, p, 0});
  }

  void AddRow(int mbox, PacketId p, Row row, const Justification& why) {
    if (!elem_.AddRow(mbox, p, row)) return;
    ++growth_;
    if (opts_.record_provenance) row_why_[RowKey{mbox, p, row}] = why;
    queue_.push_back(Fact{true, mbox, p, row});
  }

  void Drain() {
    while (!queue_.empty()) {
      Fact f = queue_.front();
      queue_.pop_front();
      if (f.is_row) {
        RowAdded(f.index, f.packet, f.row);
      } else {
        PacketAdded(f.index, f.packet);
      }
    }
  }

  void PacketAdded(int channel, PacketId p) {
    const Endpoint& to = topo_.channels[channel].to;
    if (to.is_host()) return;
    for (Row v : elem_.Rows(to.node, p)) {
      if (v == kErrRow) continue;
      jobs_.push_back(Job{AbstractStep{to.node, channel, p, v}, to.port});
    }
  }

  void RowAdded(int mbox, PacketId p, Row v) {
    if (v == kErrRow) return;
    const MiddleboxInstance& m = topo_.middleboxes[mbox];
    for (size_t c = 0; c < m.ingress.size(); ++c) {
      if (elem_.HasPacket(m.ingress[c], p)) {
        jobs_.push_back(
            Job{AbstractStep{mbox, m.ingress[c], p, v}, static_cast<int>(c)});
      }
    }
    Packet packet = space_.At(p);
    for (int id : touching_[mbox][p]) {
      const Effect& e = effects_[mbox][id];
      if (!e.multi && e.first.packet == p) continue;
      Justification why{Justification::Kind::kEffect,
                        e.first.packet != p ? e.first : e.other, p, v};
      AddRow(mbox, p, ApplyEvents(m.program, e.events, packet, v), why);
    }
  }

  void Integrate(const Job& job, const std::vector<KernelOutcome>& outcomes) {
    const AbstractStep& s = job.step;
    const MiddleboxInstance& m = topo_.middleboxes[s.mbox];
    for (const KernelOutcome& o : outcomes) {
      for (const Send& send : o.emission) {
        AddPacket(m.egress[send.channel], space_.Id(send.packet),
                  Justification{Justification::Kind::kEmitted, s});
      }
      if (o.is_err) {
        if (!err_[s.mbox]) {
          err_[s.mbox] = true;
          for (PacketId t = 0; t < space_.size(); ++t) {
            AddRow(s.mbox, t, kErrRow,
                   Justification{Justification::Kind::kErr, s});
          }
        }
        continue;
      }
      if (o.events.empty()) continue;
      AddRow(s.mbox, s.packet, o.row,
             Justification{Justification::Kind::kStepped, s});
      ApplyEffect(s, o.events);
    }
  }

  void ApplyEffect(const AbstractStep& s, const std::vector<Event>& events) {
    const CompiledProgram& prog = topo_.middleboxes[s.mbox].program;
    auto& index = effect_index_[s.mbox];
    auto& list = effects_[s.mbox];
    auto it = index.find(events);
    if (it == index.end()) {
      Effect e;
      e.events = events;
      e.first = s;
      for (const Event& ev : events) {
        for (int q : prog.queries_of_relation[ev.relation]) {
          ForEachMatchingPacket(space_, prog.queries[q], ev.values.data(),
                                [&](const Packet& t) {
                                  e.touched.push_back(space_.Id(t));
                                });
        }
      }
      std::sort(e.touched.begin(), e.touched.end());
      e.touched.erase(std::unique(e.touched.begin(), e.touched.end()),
                      e.touched.end());
      int id = static_cast<int>(list.size());
      index.emplace(events, id);
      for (PacketId t : e.touched) touching_[s.mbox][t].push_back(id);
      list.push_back(std::move(e));
      for (PacketId t : list[id].touched) {
        if (t != s.packet) Spread(s, list[id], t);
      }
      return;
    }
    Effect& e = list[it->second];
    if (e.multi || e.first.packet == s.packet) return;
    e.multi = true;
    e.other = s;
    if (std::binary_search(e.touched.begin(), e.touched.end(), e.first.packet)) {
      Spread(s, e, e.first.packet);
    }
  }

  // Applies `e` to every current row of companion `t`.
  void Spread(const AbstractStep& s, const Effect& e, PacketId t) {
    const CompiledProgram& prog = topo_.middleboxes[s.mbox].program;
    Packet packet = space_.At(t);
    RowSet rows = elem_.Rows(s.mbox, t);
    std::vector<Event> events = e.events;
    for (Row vt : rows) {
      if (vt == kErrRow) continue;
      AddRow(s.mbox, t, ApplyEvents(prog, events, packet, vt),
             Justification{Justification::Kind::kEffect, s, t, vt});
    }
  }

  const Justification* RowWhy(int mbox, PacketId p, Row row) const {
    auto it = row_why_.find(RowKey{mbox, p, row});
    return it == row_why_.end() ? nullptr : &it->second;
  }

  const Justification* PacketWhy(int channel, PacketId p) const {
    auto it = packet_why_.find((static_cast<uint64_t>(channel) << 32) | p);
    return it == packet_why_.end() ? nullptr : &it->second;
  }

  // Dependency-ordered derivation of the first err row of `mbox`.
  std::vector<WitnessEntry> Witness(int mbox) const {
    PacketId target = 0;
    for (PacketId p = 0; p < space_.size(); ++p) {
      const Justification* j = RowWhy(mbox, p, kErrRow);
      if (j != nullptr && j->kind == Justification::Kind::kErr &&
          j->step.packet == p) {
        target = p;
        break;
      }
    }
    std::vector<WitnessEntry> out;
    std::unordered_set<RowKey, RowKeyHash> seen_rows;
    std::unordered_set<uint64_t> seen_packets;
    struct Frame {
      WitnessEntry entry;
      bool expanded;
    };
    auto make_row = [&](int m, PacketId p, Row r) {
      WitnessEntry w;
      w.is_row = true;
      w.mbox = m;
      w.packet = p;
      w.row = r;
      const Justification* j = RowWhy(m, p, r);
      if (j != nullptr) w.why = *j;
      return w;
    };
    auto make_packet = [&](int e, PacketId p) {
      WitnessEntry w;
      w.channel = e;
      w.packet = p;
      const Justification* j = PacketWhy(e, p);
      if (j != nullptr) w.why = *j;
      return w;
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{make_row(mbox, target, kErrRow), false});
    seen_rows.insert(RowKey{mbox, target, kErrRow});
    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.expanded) {
        out.push_back(top.entry);
        stack.pop_back();
        continue;
      }
      top.expanded = true;
      Justification why = top.entry.why;
      if (why.kind == Justification::Kind::kInitial) continue;
      std::vector<WitnessEntry> deps;
      const AbstractStep& s = why.step;
      deps.push_back(make_packet(s.channel, s.packet));
      deps.push_back(make_row(s.mbox, s.packet, s.row));
      if (why.kind == Justification::Kind::kEffect) {
        deps.push_back(make_row(s.mbox, why.companion, why.companion_row));
      }
      for (auto d = deps.rbegin(); d != deps.rend(); ++d) {
        if (d->is_row) {
          if (!seen_rows.insert(RowKey{d->mbox, d->packet, d->row}).second) {
            continue;
          }
        } else {
          uint64_t key = (static_cast<uint64_t>(d->channel) << 32) | d->packet;
          if (!seen_packets.insert(key).second) continue;
        }
        stack.push_back(Frame{*d, false});
      }
    }
    return out;
  }

  const Topology& topo_;
  const LfpOptions& opts_;
  const PacketSpace& space_;
  AbstractElement elem_;
  std::deque<Fact> queue_;
  std::vector<Job> jobs_;
  std::vector<std::vector<Effect>> effects_;
  std::vector<std::map<std::vector<Event>, int>> effect_index_;
  std::vector<std::vector<std::vector<int>>> touching_;
  std::vector<bool> err_;
  std::unordered_map<RowKey, Justification, RowKeyHash> row_why_;
  std::unordered_map<uint64_t, Justification> packet_why_;
  size_t growth_ = 0;
};

std::string StepText(const Topology& t, const AbstractStep& s) {
  const MiddleboxInstance& m = t.middleboxes[s.mbox];
  return m.id + " reads " + t.PacketName(t.space.At(s.packet)) + " from " +
         t.channels[s.channel].id + " in row " +
         RowString(s.row, m.program.query_count());
}

}  // namespace

Verdict Lfp(const Topology& topology, const LfpOptions& options) {
  return Engine(topology, options).Run();
}

double IterationBound(const Topology& topology, bool count_err) {
  double packets = static_cast<double>(topology.space.size());
  double bound = static_cast<double>(topology.channels.size()) * packets;
  for (const MiddleboxInstance& m : topology.middleboxes) {
    bound += packets * (std::ldexp(1.0, m.program.query_count()) +
                        (count_err ? 1.0 : 0.0));
  }
  return bound;
}

nlohmann::ordered_json VerdictJson(const Topology& topology,
                                   const Verdict& verdict, bool brief) {
  using Json = nlohmann::ordered_json;
  Json doc = Json::object();
  doc["status"] = verdict.unsafe ? "UNSAFE" : "SAFE";
  doc["iterations"] = verdict.iterations;
  doc["growth"] = verdict.growth;
  doc["steps"] = verdict.steps;
  doc["seconds"] = verdict.seconds;
  Json aborting = Json::array();
  for (int m : verdict.aborting) aborting.push_back(topology.middleboxes[m].id);
  doc["aborting"] = aborting;
  const AbstractElement& a = verdict.fixpoint;
  if (!brief) {
    Json omega2 = Json::object();
    for (size_t e = 0; e < topology.channels.size(); ++e) {
      Json list = Json::array();
      for (PacketId p : a.Packets(static_cast<int>(e))) {
        list.push_back(topology.PacketJson(topology.space.At(p)));
      }
      omega2[topology.channels[e].id] = list;
    }
    doc["omega2"] = omega2;
    Json omega1 = Json::object();
    for (size_t m = 0; m < topology.middleboxes.size(); ++m) {
      const MiddleboxInstance& inst = topology.middleboxes[m];
      Json rows = Json::object();
      for (PacketId p = 0; p < topology.space.size(); ++p) {
        const RowSet& rs = a.Rows(static_cast<int>(m), p);
        if (rs.size() == 1 && rs[0] == 0) continue;
        Json list = Json::array();
        for (Row r : rs) list.push_back(RowString(r, inst.program.query_count()));
        rows[topology.PacketName(topology.space.At(p))] = list;
      }
      omega1[inst.id] = rows;
    }
    doc["omega1_summary"] = omega1;
  }
  Json witness = Json::array();
  for (const WitnessEntry& w : verdict.witness) {
    Json j = Json::object();
    Packet p = topology.space.At(w.packet);
    if (w.is_row) {
      const MiddleboxInstance& inst = topology.middleboxes[w.mbox];
      j["fact"] = "row";
      j["mbox"] = inst.id;
      j["packet"] = topology.PacketJson(p);
      j["row"] = RowString(w.row, inst.program.query_count());
    } else {
      j["fact"] = "packet";
      j["channel"] = topology.channels[w.channel].id;
      j["packet"] = topology.PacketJson(p);
    }
    switch (w.why.kind) {
      case Justification::Kind::kInitial:
        j["by"] = "initial";
        break;
      case Justification::Kind::kEmitted:
        j["by"] = "emitted when " + StepText(topology, w.why.step);
        break;
      case Justification::Kind::kStepped:
        j["by"] = "updated when " + StepText(topology, w.why.step);
        break;
      case Justification::Kind::kEffect: {
        const MiddleboxInstance& inst = topology.middleboxes[w.why.step.mbox];
        j["by"] = "effect of " + StepText(topology, w.why.step) + " on row " +
                  RowString(w.why.companion_row, inst.program.query_count());
        break;
      }
      case Justification::Kind::kErr:
        j["by"] = "abort when " + StepText(topology, w.why.step);
        break;
    }
    witness.push_back(j);
  }
  doc["witness"] = witness;
  return doc;
}

}  // namespace amdlv
