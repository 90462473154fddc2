//
//   Copyright 2026 The kes Authors
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

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace kes {

// FNV-1a, used for content keys and label-derived seeds.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64_u64(std::uint64_t x,
                                 std::uint64_t h = 0xcbf29ce484222325ull) {
  for (int i = 0; i < 8; ++i) {
    h ^= x & 0xff;
    h *= 0x100000001b3ull;
    x >>= 8;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic stream generator. Unlike the <random> engines, the output
// is pinned by this header alone, so results are identical across standard
// library implementations.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // [0, 1)
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // [lo, hi)
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // [0, n)
  std::size_t next_index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % n);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

// Seed derived from a (seed, label) pair; the basis of every deterministic
// fallback vector.
inline std::uint64_t label_seed(std::uint64_t seed, std::string_view label) {
  return fnv1a64_u64(seed, fnv1a64(label));
}

}  // namespace kes
