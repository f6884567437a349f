#pragma once

#include <map>
#include <string>
#include <vector>

#include "relsite/category.hpp"

namespace relsite {

bool same_category(const CategoryPtr& a, const CategoryPtr& b);

struct Functor {
  CategoryPtr source;
  CategoryPtr target;
  std::vector<int> objects;  // object map
  std::vector<int> arrows;   // arrow map

  int obj(int o) const { return objects[o]; }
  int arr(int a) const { return arrows[a]; }

  friend bool operator==(const Functor& f, const Functor& g);
};

/// Name-based object/arrow maps; identity arrows may be omitted.
struct FunctorTables {
  std::map<std::string, std::string> objects;
  std::map<std::string, std::string> arrows;
};

/// Checks endpoints, identities and every composite. Throws CategoryError
/// naming the violated law.
Functor validate_functor(CategoryPtr src, CategoryPtr tgt, std::vector<int> object_map, std::vector<int> arrow_map);
Functor validate_functor(const FunctorTables& tables, CategoryPtr src, CategoryPtr tgt);
FunctorTables tables_of(const Functor& f);

Functor identity_functor(const CategoryPtr& c);
/// g∘f
Functor compose(const Functor& g, const Functor& f);
Functor constant_functor(const CategoryPtr& src, const CategoryPtr& tgt, int object);
/// One -> tgt picking `object`.
Functor pick_object(const CategoryPtr& tgt, int object);
/// Unique functor to One.
Functor to_terminal(const CategoryPtr& src);

/// Is arrow-set image membership etc.: image of an arrow set under f.
ArrowSet image(const Functor& f, const ArrowSet& arrows);

struct NatTransform {
  Functor source;
  Functor target;
  std::vector<int> components;  // object of the common source -> arrow of the common target

  int at(int o) const { return components[o]; }
};

/// Checks component endpoints and every naturality square.
NatTransform validate_natural(Functor src, Functor tgt, std::vector<int> components);
NatTransform identity_natural(const Functor& f);
/// Vertical composite beta·alpha.
NatTransform vertical(const NatTransform& beta, const NatTransform& alpha);
/// True when every component is an isomorphism.
bool is_natural_iso(const NatTransform& t);

}  // namespace relsite
