// SplitMix64: a small, fast, seedable stream. Every random choice in the
// library goes through it so runs replay exactly from a seed.

#ifndef FOML_RNG_HPP_
#define FOML_RNG_HPP_

#include <cstdint>
#include <vector>

namespace foml {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) { return next() % n; }
  // Uniform in [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(below(v.size()))];
  }

 private:
  std::uint64_t state_;
};

// Seed for case `index` of a run started from `seed`.
inline std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 r(seed ^ (index * 0xd1b54a32d192ed03ULL));
  r.next();
  return r.next();
}

}  // namespace foml

#endif  // FOML_RNG_HPP_
