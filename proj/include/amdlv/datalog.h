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


#ifndef AMDLV_DATALOG_H_
#define AMDLV_DATALOG_H_

#include <string>

#include "amdlv/topology.h"

namespace amdlv {

enum class DatalogDialect : uint8_t { kGeneric, kSouffle };

bool ParseDialect(const std::string& text, DatalogDialect* out);
const char* DialectName(DatalogDialect dialect);

// Positive Datalog program whose least model holds, per channel e,
// packetSeen_<e>(s,d,t) for the packets of w2(e); per middlebox m running
// program prog, abstract_state_<prog>(m,s,d,t,b...) for the non-err rows of
// w1(m); aborted(m) when w1(m) holds err; and the nullary abort iff some
// middlebox aborted.
std::string EmitDatalog(const Topology& topology, DatalogDialect dialect);

}  // namespace amdlv

#endif  // AMDLV_DATALOG_H_
