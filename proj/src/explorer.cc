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

#include "amdlv/explorer.h"

#include <algorithm>
#include <cstring>
#include <functional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace amdlv {
namespace {

template <class State>
struct ModeTraits;

template <>
struct ModeTraits<RelationState> {
  static RelationState Initial(const MiddleboxInstance& m, const PacketSpace&) {
    return RelationState::Initial(m.program);
  }
  static void Step(const MiddleboxInstance& m, const PacketSpace&,
                   const RelationState& s, const Packet& p, int channel,
                   std::vector<std::pair<RelationState, Emission>>& out) {
    for (RelationOutcome& o : StepRelation(m.program, s, p, channel)) {
      out.emplace_back(std::move(o.state), std::move(o.emission));
    }
  }
  static std::string Key(const RelationState& s) {
    std::string key(1, s.is_err ? '\1' : '\0');
    for (const auto& rel : s.tuples) {
      uint32_t n = static_cast<uint32_t>(rel.size());
      key.append(reinterpret_cast<const char*>(&n), sizeof(n));
      key.append(reinterpret_cast<const char*>(rel.data()),
                 rel.size() * sizeof(TupleCode));
    }
    return key;
  }
  static std::vector<std::vector<RelationState>>& Store(Exploration& x) {
    return x.relation_states;
  }
};

template <>
struct ModeTraits<PacketEffectState> {
  static PacketEffectState Initial(const MiddleboxInstance&,
                                   const PacketSpace& space) {
    return PacketEffectState::Initial(space);
  }
  static void Step(const MiddleboxInstance& m, const PacketSpace& space,
                   const PacketEffectState& s, const Packet& p, int channel,
                   std::vector<std::pair<PacketEffectState, Emission>>& out) {
    for (PacketOutcome& o : StepPacket(m.program, space, s, p, channel)) {
      out.emplace_back(std::move(o.state), std::move(o.emission));
    }
  }
  static std::string Key(const PacketEffectState& s) {
    std::string key(1, s.is_err ? '\1' : '\0');
    key.append(reinterpret_cast<const char*>(s.rows.data()),
               s.rows.size() * sizeof(Row));
    return key;
  }
  static std::vector<std::vector<PacketEffectState>>& Store(Exploration& x) {
    return x.packet_states;
  }
};

struct ConfigHash {
  const std::vector<std::vector<uint32_t>>* store;
  size_t operator()(uint32_t i) const {
    uint64_t h = 1469598103934665603ull;
    for (uint32_t w : (*store)[i]) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

struct ConfigEq {
  const std::vector<std::vector<uint32_t>>* store;
  bool operator()(uint32_t a, uint32_t b) const {
    return (*store)[a] == (*store)[b];
  }
};

template <class State>
class Runner {
 public:
  using Traits = ModeTraits<State>;
  struct StepResult {
    uint32_t state;
    Emission emission;
  };

  Runner(const Topology& topology, Variant variant,
         const ExplorationBounds& bounds, Exploration& out)
      : topo_(topology),
        variant_(variant),
        bounds_(bounds),
        out_(out),
        index_(topology.middleboxes.size()),
        cache_(topology.middleboxes.size()) {
    out_.middlebox_count = topology.middleboxes.size();
    out_.channel_count = topology.channels.size();
    Traits::Store(out_).resize(topology.middleboxes.size());
    for (size_t m = 0; m < topology.middleboxes.size(); ++m) {
      Intern(static_cast<int>(m),
             Traits::Initial(topology.middleboxes[m], topology.space));
    }
  }

  std::vector<uint32_t> InitialConfig() const {
    std::vector<uint32_t> c(topo_.middleboxes.size(), 0);
    c.resize(c.size() + topo_.channels.size(), 0);
    return c;
  }

  bool IsErr(const std::vector<uint32_t>& cfg) const {
    for (size_t m = 0; m < topo_.middleboxes.size(); ++m) {
      if (Traits::Store(out_)[m][cfg[m]].is_err) return true;
    }
    return false;
  }

  // Calls emit(event, successor) for every enabled transition.
  template <class Emit>
  void Successors(const std::vector<uint32_t>& enc, Emit&& emit) {
    NetworkConfig cfg = Decode(enc);
    const PacketSpace& space = topo_.space;
    bool multiset = IsMultiset(variant_);
    for (size_t h = 0; h < topo_.hosts.size(); ++h) {
      const Host& host = topo_.hosts[h];
      for (int e : host.egress) {
        for (PacketId p : host.sendable) {
          if (!Fits(cfg.channels[e], p, 1)) {
            ++out_.capped;
            continue;
          }
          NetworkConfig next = cfg;
          Push(next.channels[e], p, multiset);
          emit(TraceEvent{TraceEvent::Kind::kHostSend, static_cast<int>(h), e,
                          space.At(p), 0},
               Encode(next));
        }
      }
      for (int e : host.ingress) {
        ForEachHead(cfg.channels[e], multiset, [&](size_t pos) {
          NetworkConfig next = cfg;
          PacketId p = next.channels[e][pos];
          next.channels[e].erase(next.channels[e].begin() + pos);
          emit(TraceEvent{TraceEvent::Kind::kHostRecv, static_cast<int>(h), e,
                          space.At(p), 0},
               Encode(next));
        });
      }
    }
    for (size_t mi = 0; mi < topo_.middleboxes.size(); ++mi) {
      const MiddleboxInstance& m = topo_.middleboxes[mi];
      int mbox = static_cast<int>(mi);
      for (size_t c = 0; c < m.ingress.size(); ++c) {
        int e = m.ingress[c];
        ForEachHead(cfg.channels[e], multiset, [&](size_t pos) {
          PacketId p = cfg.channels[e][pos];
          const std::vector<StepResult>& results =
              Step(mbox, cfg.states[mi], static_cast<int>(c), p);
          for (size_t k = 0; k < results.size(); ++k) {
            NetworkConfig next = cfg;
            next.channels[e].erase(next.channels[e].begin() + pos);
            next.states[mi] = results[k].state;
            bool fits = true;
            for (const Send& s : results[k].emission) {
              std::vector<PacketId>& ch = next.channels[m.egress[s.channel]];
              PacketId q = space.Id(s.packet);
              if (!Fits(ch, q, 1)) {
                fits = false;
                break;
              }
              Push(ch, q, multiset);
            }
            if (!fits) {
              ++out_.capped;
              continue;
            }
            emit(TraceEvent{TraceEvent::Kind::kMbox, mbox, e, space.At(p),
                            static_cast<int>(k)},
                 Encode(next));
          }
        });
      }
      if (IsReverting(variant_) && cfg.states[mi] != 0) {
        NetworkConfig next = cfg;
        next.states[mi] = 0;
        emit(TraceEvent{TraceEvent::Kind::kRevert, mbox, -1, Packet{}, 0},
             Encode(next));
      }
    }
  }

  NetworkConfig Decode(const std::vector<uint32_t>& enc) const {
    NetworkConfig cfg;
    size_t m = topo_.middleboxes.size();
    cfg.states.assign(enc.begin(), enc.begin() + m);
    size_t pos = m;
    cfg.channels.resize(topo_.channels.size());
    for (auto& ch : cfg.channels) {
      uint32_t len = enc[pos++];
      ch.assign(enc.begin() + pos, enc.begin() + pos + len);
      pos += len;
    }
    return cfg;
  }

  static std::vector<uint32_t> Encode(const NetworkConfig& cfg) {
    std::vector<uint32_t> enc(cfg.states);
    for (const auto& ch : cfg.channels) {
      enc.push_back(static_cast<uint32_t>(ch.size()));
      enc.insert(enc.end(), ch.begin(), ch.end());
    }
    return enc;
  }

 private:
  uint32_t Intern(int mbox, State s) {
    std::string key = Traits::Key(s);
    auto [it, inserted] = index_[mbox].emplace(
        std::move(key), static_cast<uint32_t>(Traits::Store(out_)[mbox].size()));
    if (inserted) Traits::Store(out_)[mbox].push_back(std::move(s));
    return it->second;
  }

  const std::vector<StepResult>& Step(int mbox, uint32_t state, int channel,
                                      PacketId p) {
    uint64_t key = (static_cast<uint64_t>(state) << 32) |
                   (static_cast<uint64_t>(channel) << 24) | p;
    auto it = cache_[mbox].find(key);
    if (it != cache_[mbox].end()) return it->second;
    std::vector<std::pair<State, Emission>> raw;
    State current = Traits::Store(out_)[mbox][state];
    Traits::Step(topo_.middleboxes[mbox], topo_.space, current,
                 topo_.space.At(p), channel, raw);
    std::vector<StepResult> results;
    for (auto& [s, e] : raw) {
      results.push_back(StepResult{Intern(mbox, std::move(s)), std::move(e)});
    }
    return cache_[mbox].emplace(key, std::move(results)).first->second;
  }

  bool Fits(const std::vector<PacketId>& ch, PacketId p, int extra) const {
    if (static_cast<int>(ch.size()) + extra > bounds_.length) return false;
    int copies = static_cast<int>(std::count(ch.begin(), ch.end(), p));
    return copies + extra <= bounds_.multiplicity;
  }

  static void Push(std::vector<PacketId>& ch, PacketId p, bool multiset) {
    if (multiset) {
      ch.insert(std::upper_bound(ch.begin(), ch.end(), p), p);
    } else {
      ch.push_back(p);
    }
  }

  // Positions a consumer may read: the head, or one position per distinct
  // packet of a multiset.
  template <class Fn>
  static void ForEachHead(const std::vector<PacketId>& ch, bool multiset,
                          Fn&& fn) {
    if (ch.empty()) return;
    if (!multiset) {
      fn(0);
      return;
    }
    for (size_t i = 0; i < ch.size(); ++i) {
      if (i == 0 || ch[i] != ch[i - 1]) fn(i);
    }
  }

  const Topology& topo_;
  Variant variant_;
  ExplorationBounds bounds_;
  Exploration& out_;
  std::vector<std::unordered_map<std::string, uint32_t>> index_;
  std::vector<std::unordered_map<uint64_t, std::vector<StepResult>>> cache_;
};

template <class State>
void RunExplore(const Topology& topology, const ExplorationBounds& bounds,
                bool stop_at_error, Exploration& x) {
  Runner<State> runner(topology, x.variant, bounds, x);
  ConfigHash hash{&x.encoded};
  ConfigEq eq{&x.encoded};
  std::unordered_set<uint32_t, ConfigHash, ConfigEq> seen(1024, hash, eq);
  std::vector<uint32_t> parent;
  std::vector<TraceEvent> via;
  x.encoded.push_back(runner.InitialConfig());
  seen.insert(0);
  parent.push_back(UINT32_MAX);
  via.emplace_back();
  x.is_err.push_back(false);
  int64_t first_err = -1;
  for (size_t i = 0; i < x.encoded.size(); ++i) {
    if (first_err >= 0 && stop_at_error) break;
    if (x.truncated) break;
    std::vector<uint32_t> current = x.encoded[i];
    runner.Successors(current, [&](const TraceEvent& ev,
                                   std::vector<uint32_t> next) {
      if (x.truncated || (first_err >= 0 && stop_at_error)) return;
      uint32_t id = static_cast<uint32_t>(x.encoded.size());
      x.encoded.push_back(std::move(next));
      if (!seen.insert(id).second) {
        x.encoded.pop_back();
        return;
      }
      if (x.encoded.size() > bounds.max_configs) {
        seen.erase(id);
        x.encoded.pop_back();
        x.truncated = true;
        return;
      }
      parent.push_back(static_cast<uint32_t>(i));
      via.push_back(ev);
      bool err = runner.IsErr(x.encoded.back());
      x.is_err.push_back(err);
      if (err && first_err < 0) first_err = id;
    });
  }
  if (first_err >= 0) {
    x.status = ExploreStatus::kUnsafe;
    for (uint32_t at = static_cast<uint32_t>(first_err); parent[at] != UINT32_MAX;
         at = parent[at]) {
      x.trace.push_back(via[at]);
    }
    std::reverse(x.trace.begin(), x.trace.end());
  } else if (x.truncated) {
    x.status = ExploreStatus::kBoundExceeded;
  } else {
    x.status = ExploreStatus::kSafe;
  }
}

template <class State>
std::optional<NetworkConfig> RunReplay(const Topology& topology,
                                       Variant variant,
                                       const ExplorationBounds& bounds,
                                       const std::vector<TraceEvent>& trace,
                                       bool* ends_in_err) {
  Exploration scratch;
  scratch.variant = variant;
  Runner<State> runner(topology, variant, bounds, scratch);
  std::vector<uint32_t> current = runner.InitialConfig();
  for (const TraceEvent& ev : trace) {
    std::optional<std::vector<uint32_t>> found;
    runner.Successors(current, [&](const TraceEvent& got,
                                   std::vector<uint32_t> next) {
      if (!found && got == ev) found = std::move(next);
    });
    if (!found) return std::nullopt;
    current = std::move(*found);
  }
  if (ends_in_err != nullptr) *ends_in_err = runner.IsErr(current);
  return runner.Decode(current);
}

}  // namespace

bool ParseVariant(const std::string& text, Variant* out) {
  if (text == "o") *out = Variant::kOrdered;
  else if (text == "u") *out = Variant::kUnordered;
  else if (text == "or") *out = Variant::kOrderedRevert;
  else if (text == "ur") *out = Variant::kUnorderedRevert;
  else return false;
  return true;
}

const char* VariantName(Variant v) {
  switch (v) {
    case Variant::kOrdered: return "o";
    case Variant::kUnordered: return "u";
    case Variant::kOrderedRevert: return "or";
    case Variant::kUnorderedRevert: return "ur";
  }
  return "?";
}

const char* ExploreStatusName(ExploreStatus s) {
  switch (s) {
    case ExploreStatus::kSafe: return "SAFE";
    case ExploreStatus::kUnsafe: return "UNSAFE";
    case ExploreStatus::kBoundExceeded: return "BOUND_EXCEEDED";
  }
  return "?";
}

NetworkConfig Exploration::Config(size_t index) const {
  const std::vector<uint32_t>& enc = encoded[index];
  NetworkConfig cfg;
  cfg.states.assign(enc.begin(), enc.begin() + middlebox_count);
  size_t pos = middlebox_count;
  cfg.channels.resize(channel_count);
  for (auto& ch : cfg.channels) {
    uint32_t len = enc[pos++];
    ch.assign(enc.begin() + pos, enc.begin() + pos + len);
    pos += len;
  }
  return cfg;
}

bool Exploration::StateIsErr(int mbox, uint32_t id) const {
  if (mode == StateMode::kRelation) return relation_states[mbox][id].is_err;
  return packet_states[mbox][id].is_err;
}

PacketEffectState Exploration::PacketState(const Topology& topology, int mbox,
                                           uint32_t id) const {
  if (mode == StateMode::kPacket) return packet_states[mbox][id];
  return PsOf(topology.middleboxes[mbox].program, topology.space,
              relation_states[mbox][id]);
}

Exploration Explore(const Topology& topology, Variant variant, StateMode mode,
                    const ExplorationBounds& bounds, bool stop_at_error) {
  Exploration x;
  x.variant = variant;
  x.mode = mode;
  if (mode == StateMode::kRelation) {
    RunExplore<RelationState>(topology, bounds, stop_at_error, x);
  } else {
    RunExplore<PacketEffectState>(topology, bounds, stop_at_error, x);
  }
  return x;
}

std::optional<NetworkConfig> ReplayTrace(const Topology& topology,
                                         Variant variant, StateMode mode,
                                         const ExplorationBounds& bounds,
                                         const std::vector<TraceEvent>& trace,
                                         bool* ends_in_err) {
  if (mode == StateMode::kRelation) {
    return RunReplay<RelationState>(topology, variant, bounds, trace,
                                    ends_in_err);
  }
  return RunReplay<PacketEffectState>(topology, variant, bounds, trace,
                                      ends_in_err);
}

AbstractElement CollectingAlpha(const Topology& topology,
                                const Exploration& x) {
  AbstractElement a = Bottom(topology);
  std::vector<std::vector<bool>> done(topology.middleboxes.size());
  for (size_t m = 0; m < topology.middleboxes.size(); ++m) {
    size_t n = x.mode == StateMode::kPacket ? x.packet_states[m].size()
                                            : x.relation_states[m].size();
    done[m].assign(n, false);
  }
  for (size_t i = 0; i < x.size(); ++i) {
    NetworkConfig cfg = x.Config(i);
    for (size_t m = 0; m < cfg.states.size(); ++m) {
      uint32_t id = cfg.states[m];
      if (done[m][id]) continue;
      done[m][id] = true;
      PacketEffectState s = x.PacketState(topology, static_cast<int>(m), id);
      for (PacketId p = 0; p < topology.space.size(); ++p) {
        a.AddRow(static_cast<int>(m), p, s.is_err ? kErrRow : s.rows[p]);
      }
    }
    for (size_t e = 0; e < cfg.channels.size(); ++e) {
      for (PacketId p : cfg.channels[e]) a.AddPacket(static_cast<int>(e), p);
    }
  }
  return a;
}

StickyResult CheckStickyPacketStates(const Topology& topology,
                                     const Exploration& x) {
  StickyResult result;
  result.complete = x.status != ExploreStatus::kBoundExceeded;
  const PacketSpace& space = topology.space;
  // Index every channel fact and every row fact seen anywhere.
  std::unordered_map<uint64_t, uint32_t> packet_fact;
  std::vector<std::pair<int, PacketId>> packet_facts;
  std::vector<std::vector<std::vector<uint32_t>>> state_facts(
      topology.middleboxes.size());
  std::unordered_map<std::string, uint32_t> row_fact;
  std::vector<std::string> row_names;
  for (size_t m = 0; m < topology.middleboxes.size(); ++m) {
    size_t n = x.mode == StateMode::kPacket ? x.packet_states[m].size()
                                            : x.relation_states[m].size();
    state_facts[m].resize(n);
  }
  std::vector<NetworkConfig> configs;
  configs.reserve(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    configs.push_back(x.Config(i));
    const NetworkConfig& cfg = configs.back();
    for (size_t e = 0; e < cfg.channels.size(); ++e) {
      for (PacketId p : cfg.channels[e]) {
        uint64_t key = (static_cast<uint64_t>(e) << 32) | p;
        if (packet_fact.emplace(key, packet_facts.size()).second) {
          packet_facts.emplace_back(static_cast<int>(e), p);
        }
      }
    }
    for (size_t m = 0; m < cfg.states.size(); ++m) {
      std::vector<uint32_t>& facts = state_facts[m][cfg.states[m]];
      if (!facts.empty()) continue;
      PacketEffectState s =
          x.PacketState(topology, static_cast<int>(m), cfg.states[m]);
      const MiddleboxInstance& inst = topology.middleboxes[m];
      for (PacketId p = 0; p < space.size(); ++p) {
        Row r = s.is_err ? kErrRow : s.rows[p];
        std::string name = inst.id + " " +
                           topology.PacketName(space.At(p)) + " " +
                           RowString(r, inst.program.query_count());
        auto [it, inserted] = row_fact.emplace(name, row_names.size());
        if (inserted) row_names.push_back(name);
        facts.push_back(it->second);
      }
    }
  }
  size_t rows = row_names.size();
  std::vector<bool> covered(packet_facts.size() * rows, false);
  for (const NetworkConfig& cfg : configs) {
    std::vector<uint32_t> present;
    for (size_t e = 0; e < cfg.channels.size(); ++e) {
      for (PacketId p : cfg.channels[e]) {
        present.push_back(packet_fact[(static_cast<uint64_t>(e) << 32) | p]);
      }
    }
    for (uint32_t f : present) {
      for (size_t m = 0; m < cfg.states.size(); ++m) {
        for (uint32_t r : state_facts[m][cfg.states[m]]) {
          covered[f * rows + r] = true;
        }
      }
    }
  }
  for (size_t f = 0; f < packet_facts.size(); ++f) {
    for (size_t r = 0; r < rows; ++r) {
      if (covered[f * rows + r]) continue;
      result.holds = false;
      result.counterexample =
          topology.PacketName(space.At(packet_facts[f].second)) + " on " +
          topology.channels[packet_facts[f].first].id + " never co-occurs with " +
          row_names[r];
      return result;
    }
  }
  return result;
}

StickyResult CheckStickyPacketStates(const Topology& topology,
                                     const ExplorationBounds& bounds,
                                     Variant variant) {
  Exploration x = Explore(topology, variant, StateMode::kPacket, bounds, false);
  return CheckStickyPacketStates(topology, x);
}

nlohmann::ordered_json TraceEventJson(const Topology& topology,
                                      const TraceEvent& ev) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  switch (ev.kind) {
    case TraceEvent::Kind::kMbox:
      j["kind"] = "mbox";
      j["mbox"] = topology.middleboxes[ev.node].id;
      break;
    case TraceEvent::Kind::kHostSend:
    case TraceEvent::Kind::kHostRecv:
      j["kind"] = "host";
      j["host"] = topology.hosts[ev.node].id;
      j["action"] = ev.kind == TraceEvent::Kind::kHostSend ? "send" : "recv";
      break;
    case TraceEvent::Kind::kRevert:
      j["kind"] = "revert";
      j["mbox"] = topology.middleboxes[ev.node].id;
      return j;
    case TraceEvent::Kind::kReorder:
      j["kind"] = "reorder";
      break;
  }
  if (ev.channel >= 0) j["channel"] = topology.channels[ev.channel].id;
  j["packet"] = topology.PacketJson(ev.packet);
  if (ev.kind == TraceEvent::Kind::kMbox) j["choice"] = ev.choice;
  return j;
}

}  // namespace amdlv
