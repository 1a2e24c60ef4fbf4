//------------------------------------------------------------------------------
//
//   Copyright 2026 The csg Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#pragma once

#include "csg/core.hpp"

#include <cstdint>
#include <random>

namespace fixtures {

// v({a1})=v({a2})=v({a3})=1, v({a1,a2})=3, v({a1,a3})=v({a2,a3})=1, v(A)=2.5
inline csg::CharacteristicFunction r3()
{
  return csg::CharacteristicFunction(3, {0.0, 1.0, 1.0, 3.0, 1.0, 1.0, 1.0, 2.5});
}

/// Small integer values so sums are exact.
inline csg::CharacteristicFunction random_integer(int n, std::uint64_t seed, int hi = 20)
{
  std::mt19937_64                    rng(seed);
  std::uniform_int_distribution<int> d(0, hi);
  csg::CharacteristicFunction        v(n);
  for (csg::Mask m = 1; m <= csg::grand_mask(n); ++m)
  {
    v.set(csg::Coalition{m}, d(rng) * std::popcount(m));
  }
  return v;
}

inline bool close(double a, double b, double rel = 1e-9)
{
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace fixtures
