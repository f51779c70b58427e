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

#ifndef AMDLV_EXPLORER_H_
#define AMDLV_EXPLORER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amdlv/abstract.h"
#include "amdlv/packet_semantics.h"
#include "amdlv/relation_semantics.h"
#include "amdlv/topology.h"
#include "json.hpp"

namespace amdlv {

enum class Variant : uint8_t {
  kOrdered,
  kUnordered,
  kOrderedRevert,
  kUnorderedRevert,
};

enum class StateMode : uint8_t { kRelation, kPacket };

bool ParseVariant(const std::string& text, Variant* out);
const char* VariantName(Variant v);
inline bool IsMultiset(Variant v) {
  return v == Variant::kUnordered || v == Variant::kUnorderedRevert;
}
inline bool IsReverting(Variant v) {
  return v == Variant::kOrderedRevert || v == Variant::kUnorderedRevert;
}

struct ExplorationBounds {
  // Copies of one packet on one channel.
  int multiplicity = 2;
  // Packets on one channel.
  int length = 6;
  size_t max_configs = 500000;
};

enum class ExploreStatus : uint8_t { kSafe, kUnsafe, kBoundExceeded };
const char* ExploreStatusName(ExploreStatus s);

struct TraceEvent {
  enum class Kind : uint8_t { kMbox, kHostSend, kHostRecv, kRevert, kReorder };

  Kind kind = Kind::kMbox;
  // Middlebox or host index.
  int node = -1;
  int channel = -1;
  Packet packet;
  // Index into the step's sorted outcome list (middlebox events).
  int choice = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Decoded configuration: middlebox state ids and channel contents. Multiset
// channels are kept sorted.
struct NetworkConfig {
  std::vector<uint32_t> states;
  std::vector<std::vector<PacketId>> channels;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
  friend auto operator<=>(const NetworkConfig&, const NetworkConfig&) = default;
};

struct Exploration {
  Variant variant = Variant::kOrdered;
  StateMode mode = StateMode::kPacket;
  ExploreStatus status = ExploreStatus::kSafe;
  size_t middlebox_count = 0;
  size_t channel_count = 0;
  // Configs as [state ids..., then per channel: length, packets...].
  std::vector<std::vector<uint32_t>> encoded;
  std::vector<bool> is_err;
  // Interned middlebox states; state id 0 is the initial state.
  std::vector<std::vector<RelationState>> relation_states;
  std::vector<std::vector<PacketEffectState>> packet_states;
  // Transitions disabled because a channel cap would be exceeded.
  size_t capped = 0;
  bool truncated = false;
  // Minimal event sequence from the initial config to the first err config.
  std::vector<TraceEvent> trace;

  size_t size() const { return encoded.size(); }
  NetworkConfig Config(size_t index) const;
  bool StateIsErr(int mbox, uint32_t id) const;
  // Packet-effect state of a middlebox state id (mapped if needed).
  PacketEffectState PacketState(const Topology& topology, int mbox,
                                uint32_t id) const;
};

// Breadth-first closure of the initial config. With `stop_at_error` the
// search ends at the first err config; otherwise the full bounded closure is
// built.
Exploration Explore(const Topology& topology, Variant variant, StateMode mode,
                    const ExplorationBounds& bounds, bool stop_at_error = true);

// Re-executes a trace; returns the final config, or nullopt if some event is
// not enabled.
std::optional<NetworkConfig> ReplayTrace(const Topology& topology,
                                         Variant variant, StateMode mode,
                                         const ExplorationBounds& bounds,
                                         const std::vector<TraceEvent>& trace,
                                         bool* ends_in_err);

// alpha of the explored set; relation-mode states are mapped through PsOf.
AbstractElement CollectingAlpha(const Topology& topology,
                                const Exploration& exploration);

struct StickyResult {
  bool holds = true;
  bool complete = true;
  std::string counterexample;
};

// Every reachable channel fact (e, p) co-occurs with every reachable row fact
// (m, p~, v~) in some explored config.
StickyResult CheckStickyPacketStates(const Topology& topology,
                                     const Exploration& exploration);
StickyResult CheckStickyPacketStates(const Topology& topology,
                                     const ExplorationBounds& bounds,
                                     Variant variant = Variant::kUnorderedRevert);

nlohmann::ordered_json TraceEventJson(const Topology& topology,
                                      const TraceEvent& event);

}  // namespace amdlv

#endif  // AMDLV_EXPLORER_H_
