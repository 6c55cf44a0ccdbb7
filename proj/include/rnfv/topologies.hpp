// Copyright 2026 the rnfv authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RNFV_TOPOLOGIES_HPP_
#define RNFV_TOPOLOGIES_HPP_

#include <string>

#include "rnfv/netmodel.hpp"

namespace rnfv {

// Builds one of the named reference substrates with unit edge weights and
// zero failure probability; callers assign probabilities and capabilities.
// Known names: "nsf" (14 nodes, 21 links), "coronet" (75 nodes, 99 links).
PhysicalNetwork builtin_topology(const std::string& name);

}  // namespace rnfv

#endif  // RNFV_TOPOLOGIES_HPP_
