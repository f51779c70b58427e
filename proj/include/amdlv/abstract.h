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

#ifndef AMDLV_ABSTRACT_H_
#define AMDLV_ABSTRACT_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "amdlv/packet.h"
#include "amdlv/topology.h"

namespace amdlv {

// Sorted, duplicate-free rows; kErrRow marks err.
using RowSet = std::vector<Row>;

// (w1, w2): per middlebox and packet a set of query valuations, and per
// channel a set of packets.
class AbstractElement {
 public:
  AbstractElement() = default;
  AbstractElement(size_t middleboxes, size_t channels, size_t packets);

  size_t middlebox_count() const { return omega1_.size(); }
  size_t channel_count() const { return omega2_.size(); }
  size_t packet_count() const { return packets_; }

  const RowSet& Rows(int mbox, PacketId p) const { return omega1_[mbox][p]; }
  bool HasRow(int mbox, PacketId p, Row row) const;
  // Returns true when the row was absent.
  bool AddRow(int mbox, PacketId p, Row row);

  bool HasPacket(int channel, PacketId p) const {
    return (omega2_[channel][p >> 6] >> (p & 63)) & 1;
  }
  bool AddPacket(int channel, PacketId p);
  std::vector<PacketId> Packets(int channel) const;
  size_t PacketCount(int channel) const;

  bool SameShape(const AbstractElement& other) const;

  friend bool operator==(const AbstractElement&,
                         const AbstractElement&) = default;

 private:
  size_t packets_ = 0;
  std::vector<std::vector<RowSet>> omega1_;
  std::vector<std::vector<uint64_t>> omega2_;
};

AbstractElement Bottom(const Topology& topology);
// Throws amdlv::Error(kShape) on elements of different shapes.
AbstractElement Join(const AbstractElement& a, const AbstractElement& b);
bool Leq(const AbstractElement& a, const AbstractElement& b);

// All-False rows everywhere and P_h preloaded on each host egress channel.
AbstractElement InitialElement(const Topology& topology);

// Tr#(a) straight from its definition: joins onto `a` every outcome of every
// substate step. Quadratic in |P|; the fixpoint engine is the fast path.
AbstractElement AbstractTransform(const Topology& topology,
                                  const AbstractElement& a);

struct ErrorLocation {
  int mbox = -1;
  PacketId packet = 0;
};

// Every (middlebox, packet) whose row set contains err; empty iff no error.
std::vector<ErrorLocation> IsError(const AbstractElement& a);

}  // namespace amdlv

#endif  // AMDLV_ABSTRACT_H_
