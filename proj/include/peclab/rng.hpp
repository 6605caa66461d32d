#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace peclab {

// Deterministic named substream of a master seed. Streams derived from the
// same (master, stage, index) triple produce identical draws, so independent
// pieces of a run can be re-executed in any order without changing results.
class RngStream {
 public:
  RngStream(uint64_t master_seed, std::string_view stage, uint64_t index = 0)
      : eng_(derive(master_seed, stage, index)) {}

  // Uniform in [0, 1).
  double uniform() {
    return (eng_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound).
  uint64_t uniform_int(uint64_t bound) {
    return static_cast<uint64_t>(uniform() * double(bound)) % bound;
  }

  uint64_t next_u64() { return eng_(); }

  std::mt19937_64& engine() { return eng_; }

 private:
  static uint64_t splitmix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static uint64_t derive(uint64_t master, std::string_view stage, uint64_t index) {
    uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the stage name
    for (char c : stage) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    uint64_t s = splitmix(master ^ h);
    s = splitmix(s ^ (index * 0xd1342543de82ef95ULL + 1));
    return s;
  }

  std::mt19937_64 eng_;
};

}  // namespace peclab
