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

#ifndef AMDLV_PACKET_H_
#define AMDLV_PACKET_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "amdlv/ast.h"

namespace amdlv {

using PacketId = uint32_t;

struct Packet {
  uint16_t src = 0;
  uint16_t dst = 0;
  uint16_t tag = 0;

  uint16_t field(int i) const { return i == 0 ? src : i == 1 ? dst : tag; }
  friend bool operator==(const Packet&, const Packet&) = default;
  friend auto operator<=>(const Packet&, const Packet&) = default;
};

// Host and tag values share one 16-bit code space; the top bit marks tags.
using ValueCode = uint16_t;
inline constexpr ValueCode kTagBit = 0x8000;
inline ValueCode HostValue(int host) { return static_cast<ValueCode>(host); }
inline ValueCode TagValue(int tag) {
  return static_cast<ValueCode>(kTagBit | tag);
}
inline bool IsTagValue(ValueCode v) { return (v & kTagBit) != 0; }
inline int ValueIndex(ValueCode v) { return v & ~kTagBit; }

// Value of packet component `field` in the shared code space.
inline ValueCode FieldValue(const Packet& p, int field) {
  return field == kFieldTag ? TagValue(p.tag) : HostValue(p.field(field));
}

// Tuples of up to four values packed into one word.
using TupleCode = uint64_t;
inline TupleCode PackTuple(const ValueCode* values, int n) {
  TupleCode t = 0;
  for (int i = 0; i < n; ++i) t = (t << 16) | values[i];
  return t;
}

// A row of a packet-effect state: bit q is the value of query q. All-ones is
// reserved for err, which caps |Q(m)| at 63.
using Row = uint64_t;
inline constexpr Row kErrRow = std::numeric_limits<Row>::max();
inline constexpr int kMaxQueries = 63;

// Dense enumeration of H x H x T in lexicographic declaration order.
class PacketSpace {
 public:
  PacketSpace() = default;
  PacketSpace(int hosts, int tags) : hosts_(hosts), tags_(tags) {}

  int hosts() const { return hosts_; }
  int tags() const { return tags_; }
  size_t size() const {
    return static_cast<size_t>(hosts_) * hosts_ * tags_;
  }

  PacketId Id(const Packet& p) const {
    return (static_cast<PacketId>(p.src) * hosts_ + p.dst) * tags_ + p.tag;
  }
  Packet At(PacketId id) const {
    Packet p;
    p.tag = static_cast<uint16_t>(id % tags_);
    id /= tags_;
    p.dst = static_cast<uint16_t>(id % hosts_);
    p.src = static_cast<uint16_t>(id / hosts_);
    return p;
  }

  std::vector<Packet> Enumerate() const;

 private:
  int hosts_ = 0;
  int tags_ = 0;
};

std::string RowString(Row row, int width);

}  // namespace amdlv

#endif  // AMDLV_PACKET_H_
