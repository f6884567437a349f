#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relsite/functor.hpp"
#include "relsite/sieve.hpp"

namespace relsite {

/// A covers-map on a finite category: for every object, a flag per sieve of
/// the lattice. Not every value is a topology; is_topology decides that.
class Topology {
 public:
  using Flags = std::vector<std::vector<char>>;

  Topology() = default;
  /// No sieve covers anything (not a topology; a starting point).
  explicit Topology(CategoryPtr base);
  Topology(CategoryPtr base, Flags flags);

  /// Only maximal sieves cover.
  static Topology trivial(const CategoryPtr& base);
  /// Every sieve covers, including the empty one.
  static Topology degenerate(const CategoryPtr& base);

  const CategoryPtr& base() const { return base_; }
  const SieveLattice& lattice() const { return base_->lattice(); }
  const Flags& flags() const { return flags_; }

  bool covers(int obj, int sieve_index) const { return flags_[obj][sieve_index] != 0; }
  /// False for arrow sets that are not sieves on obj.
  bool covers(int obj, const ArrowSet& sieve) const;
  void set(int obj, int sieve_index, bool value = true) { flags_[obj][sieve_index] = value ? 1 : 0; }

  std::vector<int> covering(int obj) const;
  /// Covering sieves with no covering proper subsieve.
  std::vector<ArrowSet> minimal_covers(int obj) const;
  int cover_count() const;

  friend bool operator==(const Topology& a, const Topology& b) {
    return same_category(a.base_, b.base_) && a.flags_ == b.flags_;
  }

 private:
  CategoryPtr base_;
  Flags flags_;
};

/// Generating families per object: families[obj] is a list of arrow lists,
/// each arrow targeting obj.
struct Coverage {
  CategoryPtr base;
  std::vector<std::vector<std::vector<int>>> families;

  explicit Coverage(CategoryPtr c) : base(std::move(c)), families(base->num_objects()) {}
  void add(int obj, std::vector<int> family) { families[obj].push_back(std::move(family)); }
};

/// Least topology in which every generated sieve covers (worklist fixed point).
Topology saturate(const Coverage& coverage);
/// Least topology containing the given covers-map.
Topology saturate(const Topology& seed);

struct TopologyCheck {
  bool holds = true;
  std::string axiom;  // "maximality" | "stability" | "transitivity"
  int object = -1;
  ArrowSet sieve;     // offending sieve (missing cover, or the covering sieve being pulled back)
  ArrowSet witness;   // transitivity: the covering sieve along which all pullbacks cover
  int arrow = -1;     // stability: the arrow of the failing pullback
  std::string message;
};

TopologyCheck is_topology(const Topology& candidate);

/// Re-evaluates the single local condition recorded in a failing check.
/// Returns true when it still fails.
bool replay_failure(const Topology& candidate, const TopologyCheck& check);

/// Every J1-cover is a J2-cover. Throws CategoryError on base mismatch.
bool topology_leq(const Topology& j1, const Topology& j2);

class NotATopology : public std::runtime_error {
 public:
  NotATopology(TopologyCheck check, Topology candidate)
      : std::runtime_error("candidate not a topology: " + check.message),
        check_(std::move(check)),
        candidate_(std::move(candidate)) {}
  const TopologyCheck& check() const { return check_; }
  const Topology& candidate() const { return candidate_; }

 private:
  TopologyCheck check_;
  Topology candidate_;
};

/// Declares S a cover on c when the sieve generated by F(S) is a K-cover on
/// F(c); throws NotATopology when the candidate fails an axiom.
Topology induced_image_topology(const Functor& f, const Topology& k);
/// The candidate covers-map, without checking the axioms.
Topology image_candidate(const Functor& f, const Topology& k);

struct TopologyEnumeration {
  std::vector<Topology> topologies;
  bool truncated = false;
};

/// All topologies on c in lectic order over (object, sieve) pairs, stopping
/// after `cap`. `visit` returns false to stop early.
bool for_each_topology(const CategoryPtr& c, std::size_t cap, const std::function<bool(const Topology&)>& visit);
TopologyEnumeration enumerate_topologies(const CategoryPtr& c, std::size_t cap);

std::string describe(const Topology& t);

}  // namespace relsite
