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

#include "amdlv/abstract.h"

#include <algorithm>
#include <bit>
#include <vector>

#include "amdlv/error.h"
#include "amdlv/packet_semantics.h"

namespace amdlv {

AbstractElement::AbstractElement(size_t middleboxes, size_t channels,
                                 size_t packets)
    : packets_(packets),
      omega1_(middleboxes, std::vector<RowSet>(packets)),
      omega2_(channels, std::vector<uint64_t>((packets + 63) / 64, 0)) {}

bool AbstractElement::HasRow(int mbox, PacketId p, Row row) const {
  const RowSet& rs = omega1_[mbox][p];
  return std::binary_search(rs.begin(), rs.end(), row);
}

bool AbstractElement::AddRow(int mbox, PacketId p, Row row) {
  RowSet& rs = omega1_[mbox][p];
  auto it = std::lower_bound(rs.begin(), rs.end(), row);
  if (it != rs.end() && *it == row) return false;
  rs.insert(it, row);
  return true;
}

bool AbstractElement::AddPacket(int channel, PacketId p) {
  uint64_t& w = omega2_[channel][p >> 6];
  uint64_t bit = uint64_t{1} << (p & 63);
  if (w & bit) return false;
  w |= bit;
  return true;
}

std::vector<PacketId> AbstractElement::Packets(int channel) const {
  std::vector<PacketId> out;
  const auto& words = omega2_[channel];
  for (size_t i = 0; i < words.size(); ++i) {
    uint64_t w = words[i];
    while (w != 0) {
      int b = std::countr_zero(w);
      out.push_back(static_cast<PacketId>(i * 64 + b));
      w &= w - 1;
    }
  }
  return out;
}

size_t AbstractElement::PacketCount(int channel) const {
  size_t n = 0;
  for (uint64_t w : omega2_[channel]) n += std::popcount(w);
  return n;
}

bool AbstractElement::SameShape(const AbstractElement& other) const {
  return packets_ == other.packets_ &&
         omega1_.size() == other.omega1_.size() &&
         omega2_.size() == other.omega2_.size();
}

AbstractElement Bottom(const Topology& topology) {
  return AbstractElement(topology.middleboxes.size(), topology.channels.size(),
                         topology.space.size());
}

AbstractElement Join(const AbstractElement& a, const AbstractElement& b) {
  if (!a.SameShape(b)) throw Error(ErrorKind::kShape, "join of unrelated elements");
  AbstractElement out = a;
  for (size_t m = 0; m < b.middlebox_count(); ++m) {
    for (PacketId p = 0; p < b.packet_count(); ++p) {
      for (Row r : b.Rows(static_cast<int>(m), p)) {
        out.AddRow(static_cast<int>(m), p, r);
      }
    }
  }
  for (size_t e = 0; e < b.channel_count(); ++e) {
    for (PacketId p : b.Packets(static_cast<int>(e))) {
      out.AddPacket(static_cast<int>(e), p);
    }
  }
  return out;
}

bool Leq(const AbstractElement& a, const AbstractElement& b) {
  if (!a.SameShape(b)) throw Error(ErrorKind::kShape, "order of unrelated elements");
  for (size_t m = 0; m < a.middlebox_count(); ++m) {
    for (PacketId p = 0; p < a.packet_count(); ++p) {
      const RowSet& x = a.Rows(static_cast<int>(m), p);
      const RowSet& y = b.Rows(static_cast<int>(m), p);
      if (!std::includes(y.begin(), y.end(), x.begin(), x.end())) return false;
    }
  }
  for (size_t e = 0; e < a.channel_count(); ++e) {
    for (PacketId p : a.Packets(static_cast<int>(e))) {
      if (!b.HasPacket(static_cast<int>(e), p)) return false;
    }
  }
  return true;
}

AbstractElement InitialElement(const Topology& topology) {
  AbstractElement a = Bottom(topology);
  for (size_t m = 0; m < topology.middleboxes.size(); ++m) {
    for (PacketId p = 0; p < topology.space.size(); ++p) {
      a.AddRow(static_cast<int>(m), p, 0);
    }
  }
  for (const Host& h : topology.hosts) {
    for (int e : h.egress) {
      for (PacketId p : h.sendable) a.AddPacket(e, p);
    }
  }
  return a;
}

AbstractElement AbstractTransform(const Topology& topology,
                                  const AbstractElement& a) {
  AbstractElement out = a;
  const PacketSpace& space = topology.space;
  for (size_t mi = 0; mi < topology.middleboxes.size(); ++mi) {
    const MiddleboxInstance& m = topology.middleboxes[mi];
    int mbox = static_cast<int>(mi);
    for (size_t c = 0; c < m.ingress.size(); ++c) {
      for (PacketId pid : a.Packets(m.ingress[c])) {
        Packet p = space.At(pid);
        for (Row v : a.Rows(mbox, pid)) {
          for (PacketId tid = 0; tid < space.size(); ++tid) {
            Packet t = space.At(tid);
            RowSet companions =
                tid == pid ? RowSet{v} : a.Rows(mbox, tid);
            for (Row vt : companions) {
              if (v == kErrRow || vt == kErrRow) {
                out.AddRow(mbox, tid, kErrRow);
                continue;
              }
              Substate sub = MakeSubstate(p, v, t, vt);
              for (const SubstateOutcome& o :
                   SubstateStep(m.program, sub, static_cast<int>(c))) {
                for (const Send& s : o.emission) {
                  out.AddPacket(m.egress[s.channel], space.Id(s.packet));
                }
                out.AddRow(mbox, tid,
                           o.sub.is_err ? kErrRow : o.sub.companion_row);
              }
            }
          }
        }
      }
    }
  }
  return out;
}

std::vector<ErrorLocation> IsError(const AbstractElement& a) {
  std::vector<ErrorLocation> out;
  for (size_t m = 0; m < a.middlebox_count(); ++m) {
    for (PacketId p = 0; p < a.packet_count(); ++p) {
      if (a.HasRow(static_cast<int>(m), p, kErrRow)) {
        out.push_back(ErrorLocation{static_cast<int>(m), p});
      }
    }
  }
  return out;
}

}  // namespace amdlv
