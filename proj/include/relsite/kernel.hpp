#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "relsite/functor.hpp"

namespace relsite {

/// (F/G) for F: D -> C and G: D' -> C. Objects are the triples
/// (d, d', u: F d -> G d') in lexicographic order of their ids.
struct CommaCategory {
  CategoryPtr category;
  Functor left;   // (d, d', u) |-> d
  Functor right;  // (d, d', u) |-> d'
  std::vector<std::tuple<int, int, int>> triples;
};

CommaCategory comma_category(const Functor& f, const Functor& g);

/// Component label per object (labels numbered in order of first object).
std::vector<int> connected_components(const Category& c);
/// Same partition as explicit object groups.
std::vector<std::vector<int>> component_partition(const Category& c);

/// Category of elements of a sieve (or of any arrow set with common target):
/// objects are the member arrows, morphisms f -> g are the h with g∘h = f.
struct ElementsCategory {
  CategoryPtr category;
  Functor projection;                 // to the ambient category: f |-> src(f)
  std::vector<int> arrow_of_object;   // object -> member arrow
  std::map<std::pair<int, int>, int> arrow_lookup;  // (h, target object) -> arrow

  int object_of_arrow(int f) const;
  int morphism(int h, int target_object) const { return arrow_lookup.at({h, target_object}); }
};

ElementsCategory elements_of_arrows(const CategoryPtr& c, int apex, const ArrowSet& arrows);
/// C/c, the category of elements of the maximal sieve on c.
ElementsCategory slice_category(const CategoryPtr& c, int apex);
/// [u] |-> [F u] from C/c to D/F(c).
Functor slice_functor(const Functor& f, int apex, const ElementsCategory& source_slice,
                      const ElementsCategory& target_slice);

struct Adjunction {
  Functor left;       // L: X -> Y
  Functor right;      // R: Y -> X
  NatTransform unit;  // Id_X => R L
  NatTransform counit;  // L R => Id_Y
};

/// Both triangle identities, componentwise. Throws CategoryError when the
/// data does not have the endpoints of an adjunction L ⊣ R.
bool check_adjunction(const Functor& left, const Functor& right, const NatTransform& unit,
                      const NatTransform& counit);
inline bool check_adjunction(const Adjunction& a) { return check_adjunction(a.left, a.right, a.unit, a.counit); }

/// The composite adjunction L∘L2 ⊣ R2∘R for L ⊣ R (X <-> Y) and L2 ⊣ R2 (Y <-> Z).
Adjunction compose_adjunctions(const Adjunction& inner, const Adjunction& outer);

struct EquivalenceCheck {
  bool holds = false;
  std::string reason;
  /// target object -> (source object, iso F(source) -> target)
  std::vector<std::pair<int, int>> essential_image;
};

EquivalenceCheck is_equivalence(const Functor& f);

/// Exhaustive search for a natural isomorphism h1 => h2.
std::optional<NatTransform> find_natural_iso(const Functor& h1, const Functor& h2);

struct Subcategory {
  CategoryPtr category;
  Functor inclusion;
};
/// Full subcategory on `objects` (in the given order).
Subcategory full_subcategory(const CategoryPtr& c, const std::vector<int>& objects);

// Finite limits, found by exhaustive search.
bool is_terminal(const Category& c, int o);
std::optional<int> find_terminal(const Category& c);
bool is_initial(const Category& c, int o);
std::optional<int> find_initial(const Category& c);

struct ProductCone {
  int apex, first, second;  // projections apex -> a, apex -> b
};
bool is_product_cone(const Category& c, const ProductCone& cone);
std::optional<ProductCone> find_product(const Category& c, int a, int b);

struct EqualizerCone {
  int apex, arrow;  // arrow: apex -> src(f)
};
bool is_equalizer(const Category& c, int f, int g, const EqualizerCone& cone);
std::optional<EqualizerCone> find_equalizer(const Category& c, int f, int g);

/// Terminal object, binary products and equalizers all exist.
bool has_finite_limits(const Category& c);
/// Images of one chosen limit of each kind are limits. Assumes `f.source`
/// has finite limits.
bool preserves_finite_limits(const Functor& f);

}  // namespace relsite
