#pragma once

#include <unordered_map>
#include <vector>

#include "relsite/category.hpp"
#include "relsite/kernel.hpp"

namespace relsite {

/// Upper bound on the total number of sieves materialized for one category.
inline constexpr int kMaxSieves = 1 << 15;

struct Sieve {
  CategoryPtr base;
  int apex = -1;
  ArrowSet arrows;

  friend bool operator==(const Sieve& a, const Sieve& b) { return a.apex == b.apex && a.arrows == b.arrows; }
};

/// Closure of a family (all members target `apex`) under precomposition.
ArrowSet generate(const Category& c, const ArrowSet& family);
Sieve generate_sieve(const CategoryPtr& c, int apex, const std::vector<int>& family);
Sieve maximal_sieve(const CategoryPtr& c, int apex);
bool is_sieve(const Category& c, int apex, const ArrowSet& arrows);
/// {g : f∘g in S}
ArrowSet pullback(const Category& c, int f, const ArrowSet& sieve);
Sieve pullback_sieve(int f, const Sieve& s);

ElementsCategory elements_of_sieve(const Sieve& s);

/// Every sieve on every object, with pullback tables between them.
class SieveLattice {
 public:
  explicit SieveLattice(const Category& c);

  int count(int obj) const { return static_cast<int>(sieves_[obj].size()); }
  int total() const { return total_; }
  const ArrowSet& sieve(int obj, int idx) const { return sieves_[obj][idx]; }
  const std::vector<ArrowSet>& sieves(int obj) const { return sieves_[obj]; }
  /// -1 when `arrows` is not a sieve on obj.
  int index_of(int obj, const ArrowSet& arrows) const;
  int maximal(int obj) const { return maximal_[obj]; }
  int empty(int obj) const { return empty_[obj]; }
  /// Index (on src(arrow)) of the pullback of sieve `idx` on tgt(arrow).
  int pullback(int arrow, int idx) const { return pullbacks_[arrow][idx]; }
  const ArrowSet& principal(int arrow) const { return principal_[arrow]; }
  /// Index of sieve `idx` on tgt(arrow) joined with the principal sieve of arrow.
  int join(int arrow, int idx) const { return joins_[arrow][idx]; }

 private:
  std::vector<std::vector<ArrowSet>> sieves_;
  std::vector<std::unordered_map<ArrowSet, int, ArrowSetHash>> index_;
  std::vector<int> maximal_, empty_;
  std::vector<std::vector<int>> pullbacks_;
  std::vector<std::vector<int>> joins_;
  std::vector<ArrowSet> principal_;
  int total_ = 0;
};

}  // namespace relsite
