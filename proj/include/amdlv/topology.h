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

#ifndef AMDLV_TOPOLOGY_H_
#define AMDLV_TOPOLOGY_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "amdlv/ast.h"
#include "amdlv/packet.h"
#include "amdlv/program.h"
#include "json.hpp"

namespace amdlv {

struct Endpoint {
  enum class Kind : uint8_t { kHost, kMiddlebox };

  Kind kind = Kind::kHost;
  int node = -1;
  // Local channel index of the middlebox program; -1 for hosts.
  int port = -1;

  bool is_host() const { return kind == Kind::kHost; }
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct Channel {
  std::string id;
  Endpoint from;
  Endpoint to;
};

struct Host {
  std::string id;
  // Sorted P_h.
  std::vector<PacketId> sendable;
  std::vector<int> egress;
  std::vector<int> ingress;
};

struct MiddleboxInstance {
  std::string id;
  std::string program_path;
  bool safety = false;
  std::shared_ptr<const MiddleboxProgram> source;
  CompiledProgram program;
  // Network channel wired to each local channel, by local channel index.
  std::vector<int> ingress;
  std::vector<int> egress;
  // Network channel to local channel, for channels entering this middlebox.
  std::map<int, int> local_of_ingress;
};

struct Topology {
  std::vector<Host> hosts;
  std::vector<std::string> tags;
  std::map<std::string, ValueCode> constants;
  std::vector<MiddleboxInstance> middleboxes;
  std::vector<Channel> channels;
  PacketSpace space;
  // Directory that program paths are relative to.
  std::string base_dir;
  // Canonical document the topology was built from.
  nlohmann::ordered_json document;

  int FindHost(const std::string& id) const;
  int FindTag(const std::string& name) const;
  int FindMiddlebox(const std::string& id) const;
  int FindChannel(const std::string& id) const;
  std::optional<ValueCode> ResolveConstant(const std::string& name) const;

  std::vector<Packet> EnumeratePackets() const { return space.Enumerate(); }
  std::string PacketName(const Packet& p) const;
  std::string ValueName(ValueCode v) const;
  nlohmann::ordered_json PacketJson(const Packet& p) const;
  std::string EndpointName(const Endpoint& e) const;
};

// Supplies program text for a path relative to the topology directory.
using ProgramLoader = std::function<std::string(const std::string& path)>;

// Reads program files from disk, relative to `base_dir`.
ProgramLoader FileProgramLoader(const std::string& base_dir);

Topology LoadTopology(const std::string& path);
Topology LoadTopologyJson(const nlohmann::ordered_json& doc,
                          const std::string& base_dir,
                          const ProgramLoader& loader);

// Canonical document: explicit sendable sets, link names and directions.
nlohmann::ordered_json SerializeTopology(const Topology& topology);

// Stable digest of the canonical document and the program sources.
std::string TopologyHash(const Topology& topology);

}  // namespace amdlv

#endif  // AMDLV_TOPOLOGY_H_
