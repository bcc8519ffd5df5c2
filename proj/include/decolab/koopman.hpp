// Copyright 2026 The decolab Authors
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

// Self-maps of a finite set and their composition (Koopman) operators on C^m.

#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "decolab/channel.hpp"

namespace decolab {

/// tau(i) = targets[i].
struct FiniteMap {
  std::vector<std::size_t> targets;

  std::size_t size() const { return targets.size(); }
  /// Throws InputError when a target is out of range or the map is empty.
  void validate() const;
};

struct CycleStructure {
  /// Cycle lengths, one entry per cycle, ordered by smallest member.
  std::vector<std::size_t> cycles;
  /// Steps from each point to the eventual image.
  std::vector<std::size_t> tail_lengths;
  /// Points lying on cycles, ascending.
  std::vector<std::size_t> eventual_image;
  /// max tail length; tau^{n0+1}(X) = tau^{n0}(X).
  std::size_t stabilization_index = 0;
  /// All |c|-th roots of unity per cycle c, plus 0 for every tail point.
  std::vector<Complex> predicted_spectrum;
};

/// K[i][tau(i)] = 1, i.e. (K f)(i) = f(tau(i)).
Channel koopman_channel(const FiniteMap& map);

CycleStructure cycle_structure(const FiniteMap& map);

/// Read tau back from a channel on C^m whose rows are point evaluations.
/// Throws InputError otherwise.
FiniteMap recover_finite_map(const Channel& ch);

struct CorrespondenceVerdict {
  bool round_trip = false;
  double multiplicativity_residual = 0.0;
  bool unital = false;
  bool ok = false;
};

CorrespondenceVerdict verify_endomorphism_correspondence(const FiniteMap& map);

FiniteMap random_finite_map(std::size_t m, std::mt19937_64& rng);

}  // namespace decolab
