#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "relsite/fibration.hpp"

namespace relsite {

/// Finite-set-valued presheaf. Elements of P(c) are 0..size(c)-1; the
/// action of f: c -> c' maps P(c') to P(c).
struct Presheaf {
  CategoryPtr base;
  std::vector<int> sizes;
  std::vector<std::vector<int>> actions;
  std::vector<std::vector<std::string>> labels;  // optional, for printing

  int size(int c) const { return sizes[c]; }
  int act(int f, int x) const { return actions[f][x]; }
  std::string label(int c, int x) const;

  /// Same sizes and actions.
  friend bool operator==(const Presheaf& a, const Presheaf& b) {
    return same_category(a.base, b.base) && a.sizes == b.sizes && a.actions == b.actions;
  }
};

/// Checks endpoints and functoriality; throws CategoryError.
Presheaf validate_presheaf(CategoryPtr base, std::vector<int> sizes, std::vector<std::vector<int>> actions);
Presheaf representable_presheaf(const CategoryPtr& base, int d);
Presheaf terminal_presheaf(const CategoryPtr& base);
/// P∘F^op.
Presheaf precompose(const Presheaf& p, const Functor& f);

/// components[c][x] ∈ Q(c) for x ∈ P(c).
struct PresheafMap {
  std::vector<std::vector<int>> components;
};

bool is_natural(const Presheaf& p, const Presheaf& q, const PresheafMap& m);
PresheafMap compose(const PresheafMap& second, const PresheafMap& first);
/// Every component is a bijection.
bool is_iso(const Presheaf& p, const Presheaf& q, const PresheafMap& m);

/// Compatible families on `sieve` (a sieve on c), each listed as the values
/// on sieve.elements() in order; families come in lexicographic order.
std::vector<std::vector<int>> matching_families(const Presheaf& p, const ArrowSet& sieve);

struct SheafCheck {
  bool holds = true;
  int object = -1;
  ArrowSet sieve;
  std::vector<int> family;   // a matching family ...
  int amalgamations = 0;     // ... with this many amalgamations (not 1)
  std::string message;
};

SheafCheck is_sheaf(const Presheaf& p, const Topology& j);

struct PlusResult {
  Presheaf presheaf;
  PresheafMap unit;  // P -> P+
  std::vector<ArrowSet> least_cover;  // per object, the sieve the families live on
};

/// Since covers at an object are closed under intersection, the colimit of
/// matching families over covers is computed on the least cover.
PlusResult plus(const Presheaf& p, const Topology& j);

struct Sheafification {
  Presheaf sheaf;
  PresheafMap unit;
};

/// Plus applied twice.
Sheafification sheafify(const Presheaf& p, const Topology& j);

struct PresheafSearch {
  int bound = 3;             // largest value set
  std::uint64_t budget = 0;  // partial assignments before CapError; 0 for none
  bool up_to_iso = false;    // one presheaf per isomorphism class
};

/// Every presheaf with value sets of size <= bound, in a fixed order.
/// `visit` returns false to stop.
void for_each_presheaf(const CategoryPtr& base, int bound, const std::function<bool(const Presheaf&)>& visit);
void for_each_presheaf(const CategoryPtr& base, const PresheafSearch& opts,
                       const std::function<bool(const Presheaf&)>& visit);
/// Every natural map P -> Q.
void for_each_natural_map(const Presheaf& p, const Presheaf& q, const std::function<bool(const PresheafMap&)>& visit);

struct UniversalCheck {
  bool holds = true;
  int sheaves = 0;  // targets examined
  int maps = 0;     // natural maps P -> Q examined
  std::string message;
};

/// For every sheaf Q with values of size <= bound and every α: P -> Q,
/// exactly one β: aP -> Q with β∘unit = α. Targets are taken up to
/// isomorphism; `sheaves` counts isomorphism classes.
UniversalCheck check_universal_property(const Presheaf& p, const Topology& j, const Sheafification& s, int bound = 3,
                                        std::uint64_t budget = 0);

/// P(e) = {(g: e -> d', w: p'(e) -> c'') : f'∘w = u'∘p'(g)}, acting by
/// h |-> (g∘h, w∘p'(h)). `elements[e]` lists the pairs.
struct PullbackPresheaf {
  Presheaf presheaf;
  std::vector<std::vector<std::pair<int, int>>> elements;
};
PullbackPresheaf prop33_pullback_presheaf(const Functor& p2, int d2, int u2, int f2);

std::string describe(const Presheaf& p);

}  // namespace relsite
