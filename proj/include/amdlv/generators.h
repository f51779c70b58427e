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


#ifndef AMDLV_GENERATORS_H_
#define AMDLV_GENERATORS_H_

#include <map>
#include <string>

#include "amdlv/topology.h"
#include "json.hpp"

namespace amdlv {

// A topology document together with the text of every program it names.
struct GeneratedNetwork {
  nlohmann::ordered_json topology;
  std::map<std::string, std::string> programs;

  Topology Build() const;
  // Writes topology.json and the programs into `dir`.
  void Write(const std::string& dir) const;
};

// Enterprise network with `hosts` hosts split into outside, public,
// quarantined and private groups (at least one each, so hosts >= 4). A
// gateway sprays outside traffic to three subnet firewalls: allow-all for
// the public subnet, drop-all for the quarantined subnet and a session
// firewall for the private subnet. Each subnet switch routes on the
// destination; the quarantined switch aborts on anything from its uplink.
GeneratedNetwork EnterpriseNetwork(int hosts);

// Datacenter with `chains` firewall -> IPS -> load balancer pipelines
// between an edge switch facing internet hosts and an aggregation switch
// facing servers. The IPS drops nondeterministically, the load balancer
// rewrites the virtual address to a server replica, and an isolation
// middlebox guards one protected server against internet sources. Needs
// hosts >= 5 and chains >= 1.
GeneratedNetwork DatacenterNetwork(int chains, int hosts = 12);

}  // namespace amdlv

#endif  // AMDLV_GENERATORS_H_
