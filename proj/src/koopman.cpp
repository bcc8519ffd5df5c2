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

#include "decolab/koopman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "decolab/error.hpp"

namespace decolab {

using Index = Eigen::Index;

void FiniteMap::validate() const {
  if (targets.empty()) throw InputError("finite map must have at least one point");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] >= targets.size()) {
      std::ostringstream os;
      os << "finite map: target " << targets[i] << " of point " << i
         << " is out of range [0, " << targets.size() << ")";
      throw InputError(os.str());
    }
  }
}

Channel koopman_channel(const FiniteMap& map) {
  map.validate();
  const auto m = static_cast<Index>(map.size());
  CMatrix k = CMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    k(i, static_cast<Index>(map.targets[static_cast<std::size_t>(i)])) = 1.0;
  }
  return Channel(AlgebraShape::abelian(map.size()), std::move(k),
                 Provenance::koopman);
}

CycleStructure cycle_structure(const FiniteMap& map) {
  map.validate();
  const std::size_t m = map.size();
  CycleStructure out;

  // x is periodic iff tau^k(x) = x for some 1 <= k <= m.
  std::vector<bool> periodic(m, false);
  for (std::size_t x = 0; x < m; ++x) {
    std::size_t y = map.targets[x];
    for (std::size_t k = 1; k <= m; ++k) {
      if (y == x) {
        periodic[x] = true;
        break;
      }
      y = map.targets[y];
    }
  }

  std::vector<bool> seen(m, false);
  for (std::size_t x = 0; x < m; ++x) {
    if (!periodic[x] || seen[x]) continue;
    std::size_t len = 0;
    std::size_t y = x;
    do {
      seen[y] = true;
      y = map.targets[y];
      ++len;
    } while (y != x);
    out.cycles.push_back(len);
  }
  for (std::size_t x = 0; x < m; ++x) {
    if (periodic[x]) out.eventual_image.push_back(x);
  }

  out.tail_lengths.resize(m);
  for (std::size_t x = 0; x < m; ++x) {
    std::size_t steps = 0;
    std::size_t y = x;
    while (!periodic[y]) {
      y = map.targets[y];
      ++steps;
    }
    out.tail_lengths[x] = steps;
    out.stabilization_index = std::max(out.stabilization_index, steps);
  }

  for (const std::size_t len : out.cycles) {
    for (std::size_t k = 0; k < len; ++k) {
      out.predicted_spectrum.push_back(std::polar(
          1.0, 2.0 * std::numbers::pi * static_cast<double>(k) /
                   static_cast<double>(len)));
    }
  }
  out.predicted_spectrum.resize(m, Complex(0.0));
  return out;
}

FiniteMap recover_finite_map(const Channel& ch) {
  const AlgebraShape& shape = ch.shape();
  for (const std::size_t n : shape.block_dims()) {
    if (n != 1) throw InputError("not a Koopman channel: algebra is not abelian");
  }
  const CMatrix& k = ch.superop();
  FiniteMap map;
  for (Index i = 0; i < k.rows(); ++i) {
    std::size_t hits = 0;
    std::size_t target = 0;
    for (Index j = 0; j < k.cols(); ++j) {
      if (k(i, j) == Complex(1.0)) {
        ++hits;
        target = static_cast<std::size_t>(j);
      } else if (k(i, j) != Complex(0.0)) {
        hits = 2;  // anything else disqualifies the row
      }
    }
    if (hits != 1) {
      std::ostringstream os;
      os << "not a Koopman channel: row " << i << " is not a point evaluation";
      throw InputError(os.str());
    }
    map.targets.push_back(target);
  }
  return map;
}

CorrespondenceVerdict verify_endomorphism_correspondence(const FiniteMap& map) {
  const Channel ch = koopman_channel(map);
  CorrespondenceVerdict out;
  out.round_trip = recover_finite_map(ch).targets == map.targets;
  const auto basis = matrix_unit_basis(ch.shape());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double r = norm(ch(multiply(basis[i], basis[j])) -
                            multiply(ch(basis[i]), ch(basis[j])));
      out.multiplicativity_residual = std::max(out.multiplicativity_residual, r);
    }
  }
  out.unital = is_unital(ch);
  out.ok = out.round_trip && out.unital && out.multiplicativity_residual == 0.0;
  return out;
}

FiniteMap random_finite_map(std::size_t m, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  FiniteMap map;
  map.targets.resize(m);
  for (auto& t : map.targets) t = pick(rng);
  return map;
}

}  // namespace decolab
