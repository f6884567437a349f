#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "relsite/sheaf.hpp"

namespace relsite {

using Rng = std::mt19937_64;

/// Mixes (seed, stream) into an independent seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

int uniform(Rng& rng, int lo, int hi);  // inclusive
bool coin(Rng& rng, double p = 0.5);

/// Reflexive-transitive closure of a random relation on n elements.
CategoryPtr random_poset(Rng& rng, int n);
/// A random poset where up to `marks` objects carry an extra endomorphism,
/// idempotent or involutive. An arrow x -> y is (x <= y, a subset of the
/// marks m with x <= m <= y); marks combine by union for idempotents and by
/// symmetric difference for involutions.
CategoryPtr random_marked_category(Rng& rng, int n, int marks);
/// Posets, marked posets and the split-epi category, at most n objects.
CategoryPtr random_category(Rng& rng, int max_objects);
/// Finite meet-semilattice with top (so finite limits), at most n elements.
CategoryPtr random_lattice(Rng& rng, int max_objects);

/// One or two random non-empty families on about half of the objects.
Coverage random_coverage(Rng& rng, const CategoryPtr& c);
/// Saturation of a few random families; sometimes trivial or degenerate.
Topology random_topology(Rng& rng, const CategoryPtr& c);
/// Saturation of random families drawn from the covers of `bound`, so the
/// result is contained in `bound` when `bound` is a topology.
Topology random_subtopology(Rng& rng, const Topology& bound);

/// Backtracking search over random candidate maps; falls back to a constant
/// functor.
Functor random_functor(Rng& rng, const CategoryPtr& src, const CategoryPtr& tgt);
/// Every functor src -> tgt (exhaustive).
std::vector<Functor> all_functors(const CategoryPtr& src, const CategoryPtr& tgt, std::size_t cap = 1U << 16);

/// Random fibers with at most `max_fiber` objects and restriction functors
/// chosen arrow by arrow, composites forced where a factorization is known.
IndexedCategory random_indexed(Rng& rng, const CategoryPtr& base, int max_fiber);
/// Fibers are principal down-sets of a lattice, restrictions are meets:
/// a cartesian indexed category over a poset base.
IndexedCategory random_cartesian_indexed(Rng& rng, const CategoryPtr& base, int max_fiber);

/// An indexed natural transformation out of `cix` together with its target:
/// inclusion of a restriction-closed sub-indexed category, collapse to One,
/// or the identity.
struct IndexedMap {
  IndexedCategory source;
  IndexedCategory target;
  std::vector<Functor> components;
};
IndexedMap random_indexed_map(Rng& rng, const IndexedCategory& cix);

Presheaf random_presheaf(Rng& rng, const CategoryPtr& base, int bound);

/// Monotone maps between posets (functors between thin categories) with a
/// right adjoint; nullopt when none was found.
std::optional<Adjunction> random_galois_connection(Rng& rng, const CategoryPtr& x, const CategoryPtr& y);
/// L ⊣ R from object maps l: X -> Y and r: Y -> X of posets.
Adjunction galois_adjunction(const CategoryPtr& x, const CategoryPtr& y, const std::vector<int>& l,
                             const std::vector<int>& r);
/// A full subcategory whose inclusion is a dense morphism of sites for the
/// restricted topology. Proper subcategories are tried first in random
/// order; the whole category always qualifies.
struct DenseInclusion {
  Subcategory sub;
  Topology topology;
  bool proper = false;
};
DenseInclusion random_dense_inclusion(Rng& rng, const CategoryPtr& c, const Topology& j);

bool is_poset(const Category& c);

}  // namespace relsite
