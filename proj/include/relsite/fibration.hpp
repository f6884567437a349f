#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <vector>

#include "relsite/kernel.hpp"
#include "relsite/topology.hpp"

namespace relsite {

/// Strict functor base^op -> Cat: a fiber per base object and, for every
/// base arrow f: c -> c', a restriction functor fiber(c') -> fiber(c).
struct IndexedCategory {
  CategoryPtr base;
  std::vector<CategoryPtr> fibers;
  std::vector<Functor> restrictions;

  const Category& fiber(int c) const { return *fibers[c]; }
  const Functor& restriction(int f) const { return restrictions[f]; }
};

/// Checks endpoints, restriction(id) = Id and restriction(g∘f) =
/// restriction(f)∘restriction(g). Throws CategoryError.
IndexedCategory validate_indexed(CategoryPtr base, std::vector<CategoryPtr> fibers, std::vector<Functor> restrictions);
IndexedCategory constant_indexed(const CategoryPtr& base, const CategoryPtr& fiber);
/// fiber(c') = discrete set hom(c', c); restriction along f is u |-> u∘f.
IndexedCategory representable_indexed(const CategoryPtr& base, int c);
/// Dix∘F^op for F: C -> D.
IndexedCategory precompose(const IndexedCategory& dix, const Functor& f);
bool operator==(const IndexedCategory& a, const IndexedCategory& b);

enum class CartesianMode { strict, street };

/// A functor p: total -> base with its table of cartesian arrows.
struct FibrationBundle {
  CategoryPtr total;
  Functor projection;
  ArrowSet cartesian;
  std::optional<Topology> giraud;
};

FibrationBundle make_bundle(const Functor& projection);

/// Unique-factorization lifting property, checked over every (d'', g, h).
/// The σ of the Street condition only enters is_fibration: for a single
/// arrow both modes test the same property.
bool is_cartesian_arrow(const Functor& p, int arrow, CartesianMode mode = CartesianMode::strict);
inline bool is_cartesian_arrow(const FibrationBundle& b, int arrow, CartesianMode mode = CartesianMode::strict) {
  return is_cartesian_arrow(b.projection, arrow, mode);
}

struct FibrationCheck {
  bool holds = true;
  int object = -1;       // d in the total category
  int base_arrow = -1;   // f: c -> p(d) with no cartesian lift
  std::string message;
};

/// Every f: c -> p(d) has a cartesian lift with codomain d; in street mode a
/// lift g: d' -> d with p(g) = f∘σ for an iso σ: c -> p(d') is accepted.
FibrationCheck is_fibration(const Functor& p, CartesianMode mode = CartesianMode::strict);

/// Total category G(Cix) with objects (x, c), x in fiber(c), and arrows
/// (u, f): (x, c) -> (x', c') where f: c -> c' and u: x -> Cix(f)(x').
struct Grothendieck {
  IndexedCategory indexed;
  FibrationBundle bundle;
  std::vector<std::pair<int, int>> object_pair;  // total object -> (x, c)
  std::vector<std::pair<int, int>> arrow_pair;   // total arrow -> (u, f)
  std::vector<std::vector<int>> object_index;    // [c][x] -> total object
  std::map<std::tuple<int, int, int>, int> arrow_index;  // (u, f, x') -> total arrow

  const CategoryPtr& total() const { return bundle.total; }
  const Functor& projection() const { return bundle.projection; }
  int object_of(int x, int c) const { return object_index[c][x]; }
  /// (u, f) with codomain (x', tgt f); x' is needed since u alone does not
  /// determine it when the restriction along f is not injective.
  int arrow_of(int u, int f, int x_target) const { return arrow_index.at({u, f, x_target}); }
};

Grothendieck grothendieck(const IndexedCategory& cix);

/// (u, f) is cartesian iff u is an isomorphism of its fiber.
bool is_cartesian_by_fiber_iso(const Grothendieck& g, int arrow);

/// A: src.total -> tgt.total over B: base -> base' with an iso
/// φ: p'∘A => B∘p; true iff φ is a natural iso and A preserves cartesian
/// arrows. Throws CategoryError on a malformed square.
bool is_morphism_of_fibrations(const Functor& a, const Functor& b, const FibrationBundle& src,
                               const FibrationBundle& tgt, const NatTransform& square);
/// Same with p'∘A = B∘p on the nose.
bool is_morphism_of_fibrations(const Functor& a, const Functor& b, const FibrationBundle& src,
                               const FibrationBundle& tgt);

/// (x, c) |-> (α_c x, c) for an indexed natural transformation α between
/// two indexed categories over the same base. Throws CategoryError when α
/// is not natural.
Functor total_functor(const Grothendieck& src, const Grothendieck& tgt, const std::vector<Functor>& alpha);

/// x |-> A(x, c) as a functor fiber(c) -> fiber'(B c). Requires the square
/// to commute strictly.
Functor fiber_functor(const Functor& a, const Functor& b, const Grothendieck& src, const Grothendieck& tgt, int c);

/// Saturation of the coverage whose families at (x, c) are the canonical
/// cartesian lifts (id, f) of the minimal J-covers on c.
Topology giraud_topology(const Grothendieck& g, const Topology& j);

struct DirectImage {
  Grothendieck pulled;  // G(Dix∘F)
  Functor q;            // (x, c) |-> (x, F c)
};

/// Pullback of G(Dix) along F: C -> D.
DirectImage direct_image(const Grothendieck& dix, const Functor& f);

/// For every arrow of the pulled-back total category, cartesian iff its
/// q-image is cartesian.
bool q_reflects_cartesian(const DirectImage& di, const Grothendieck& target);

/// The inverse image of Cix along L ⊣ R (L: D -> C, R: C -> D), which is
/// Cix∘L^op over D, with its two comparison functors.
struct InverseImage {
  Grothendieck pulled;     // G(Cix∘L)
  Functor left;            // (x, d) |-> (x, L d)
  Functor right;           // (x, c) |-> (Cix(ε_c)(x), R c)
  Adjunction comparison;   // left ⊣ right
};

/// Throws CategoryError when `adj` is not an adjunction or does not match
/// the base of Cix.
InverseImage inverse_image_adjoint(const Grothendieck& cix, const Adjunction& adj);

/// ζ: (x, c) |-> (Cix(ε_c)(x), c) into G((Cix∘L)∘R), followed by the
/// projection q_R of that pullback.
struct StructureFunctor {
  InverseImage inverse;
  DirectImage twice;  // pullback of G(Cix∘L) along R
  Functor zeta;
  Functor composite;
};
StructureFunctor structure_functor(const Grothendieck& cix, const Adjunction& adj);

struct BaseChangeIso {
  bool found = false;
  std::string reason;
  std::vector<NatTransform> isos;
};

/// Direct images along F then F' against the direct image along F'∘F:
/// indexed tables and projections must agree exactly.
BaseChangeIso compose_direct_images(const Grothendieck& dix, const Functor& f, const Functor& f2);
/// Inverse images along inner = (L2 ⊣ R2) then outer = (L1 ⊣ R1), with Cix
/// over the codomain of L1, against the composite adjunction.
BaseChangeIso compose_inverse_images(const Grothendieck& cix, const Adjunction& outer, const Adjunction& inner);
/// For representables: slice functors (F'F)^c and F'^{Fc}∘F^c.
BaseChangeIso compose_slices(const Functor& f, const Functor& f2, int c);

/// Every fiber has finite limits and every restriction preserves them.
bool is_cartesian_fibration(const IndexedCategory& cix);

/// Projection of the arrow category of c onto codomains.
FibrationBundle codomain_fibration(const CategoryPtr& c);

std::string describe(const Grothendieck& g);

}  // namespace relsite
