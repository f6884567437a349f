#include "relsite/functor.hpp"

namespace relsite {

bool same_category(const CategoryPtr& a, const CategoryPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->same_as(*b);
}

bool operator==(const Functor& f, const Functor& g) {
  return same_category(f.source, g.source) && same_category(f.target, g.target) && f.objects == g.objects &&
         f.arrows == g.arrows;
}

Functor validate_functor(CategoryPtr src, CategoryPtr tgt, std::vector<int> object_map, std::vector<int> arrow_map) {
  const Category& s = *src;
  const Category& t = *tgt;
  if (static_cast<int>(object_map.size()) != s.num_objects() || static_cast<int>(arrow_map.size()) != s.num_arrows())
    throw CategoryError("functor maps are not total");
  for (int o = 0; o < s.num_objects(); ++o)
    if (object_map[o] < 0 || object_map[o] >= t.num_objects())
      throw CategoryError("dangling object image for " + s.object_name(o));
  for (int a = 0; a < s.num_arrows(); ++a) {
    int fa = arrow_map[a];
    if (fa < 0 || fa >= t.num_arrows()) throw CategoryError("dangling arrow image for " + s.arrow_name(a));
    if (t.src(fa) != object_map[s.src(a)] || t.tgt(fa) != object_map[s.tgt(a)])
      throw CategoryError("endpoint mismatch at " + s.arrow_name(a));
  }
  for (int o = 0; o < s.num_objects(); ++o)
    if (arrow_map[s.identity(o)] != t.identity(object_map[o]))
      throw CategoryError("identity not preserved at " + s.object_name(o));
  for (int f = 0; f < s.num_arrows(); ++f)
    for (int g : s.arrows_out(s.tgt(f)))
      if (arrow_map[s.compose(g, f)] != t.compose(arrow_map[g], arrow_map[f]))
        throw CategoryError("composite not preserved at (" + s.arrow_name(g) + ", " + s.arrow_name(f) + ")");
  return Functor{std::move(src), std::move(tgt), std::move(object_map), std::move(arrow_map)};
}

Functor validate_functor(const FunctorTables& tables, CategoryPtr src, CategoryPtr tgt) {
  const Category& s = *src;
  const Category& t = *tgt;
  std::vector<int> om(s.num_objects(), -1), am(s.num_arrows(), -1);
  for (const auto& [k, v] : tables.objects) {
    auto o = s.find_object(k);
    if (!o) throw CategoryError("unknown source object " + k);
    auto w = t.find_object(v);
    if (!w) throw CategoryError("dangling object " + v);
    om[*o] = *w;
  }
  for (int o = 0; o < s.num_objects(); ++o)
    if (om[o] < 0) throw CategoryError("dangling object: no image for " + s.object_name(o));
  for (const auto& [k, v] : tables.arrows) {
    auto a = s.find_arrow(k);
    if (!a) throw CategoryError("unknown source arrow " + k);
    auto w = t.find_arrow(v);
    if (!w) throw CategoryError("dangling arrow " + v);
    am[*a] = *w;
  }
  for (int o = 0; o < s.num_objects(); ++o)
    if (am[s.identity(o)] < 0) am[s.identity(o)] = t.identity(om[o]);
  for (int a = 0; a < s.num_arrows(); ++a)
    if (am[a] < 0) throw CategoryError("no image for arrow " + s.arrow_name(a));
  return validate_functor(std::move(src), std::move(tgt), std::move(om), std::move(am));
}

FunctorTables tables_of(const Functor& f) {
  FunctorTables t;
  for (int o = 0; o < f.source->num_objects(); ++o)
    t.objects[f.source->object_name(o)] = f.target->object_name(f.obj(o));
  for (int a = 0; a < f.source->num_arrows(); ++a)
    if (!f.source->is_identity(a)) t.arrows[f.source->arrow_name(a)] = f.target->arrow_name(f.arr(a));
  return t;
}

Functor identity_functor(const CategoryPtr& c) {
  Functor f{c, c, {}, {}};
  for (int o = 0; o < c->num_objects(); ++o) f.objects.push_back(o);
  for (int a = 0; a < c->num_arrows(); ++a) f.arrows.push_back(a);
  return f;
}

Functor compose(const Functor& g, const Functor& f) {
  if (!same_category(f.target, g.source)) throw CategoryError("functor composite: mismatched categories");
  Functor h{f.source, g.target, {}, {}};
  for (int o : f.objects) h.objects.push_back(g.obj(o));
  for (int a : f.arrows) h.arrows.push_back(g.arr(a));
  return h;
}

Functor constant_functor(const CategoryPtr& src, const CategoryPtr& tgt, int object) {
  Functor f{src, tgt, std::vector<int>(src->num_objects(), object),
            std::vector<int>(src->num_arrows(), tgt->identity(object))};
  return f;
}

Functor pick_object(const CategoryPtr& tgt, int object) {
  return constant_functor(terminal_category(), tgt, object);
}

Functor to_terminal(const CategoryPtr& src) { return constant_functor(src, terminal_category(), 0); }

ArrowSet image(const Functor& f, const ArrowSet& arrows) {
  ArrowSet out;
  arrows.for_each([&](int a) { out.insert(f.arr(a)); });
  return out;
}

NatTransform validate_natural(Functor src, Functor tgt, std::vector<int> components) {
  if (!same_category(src.source, tgt.source) || !same_category(src.target, tgt.target))
    throw CategoryError("natural transformation between functors with different endpoints");
  const Category& c = *src.source;
  const Category& d = *src.target;
  if (static_cast<int>(components.size()) != c.num_objects()) throw CategoryError("components are not total");
  for (int o = 0; o < c.num_objects(); ++o) {
    int a = components[o];
    if (a < 0 || a >= d.num_arrows() || d.src(a) != src.obj(o) || d.tgt(a) != tgt.obj(o))
      throw CategoryError("component at " + c.object_name(o) + " has wrong endpoints");
  }
  for (int f = 0; f < c.num_arrows(); ++f)
    if (d.compose(tgt.arr(f), components[c.src(f)]) != d.compose(components[c.tgt(f)], src.arr(f)))
      throw CategoryError("naturality fails at " + c.arrow_name(f));
  return NatTransform{std::move(src), std::move(tgt), std::move(components)};
}

NatTransform identity_natural(const Functor& f) {
  std::vector<int> comps;
  for (int o : f.objects) comps.push_back(f.target->identity(o));
  return NatTransform{f, f, std::move(comps)};
}

NatTransform vertical(const NatTransform& beta, const NatTransform& alpha) {
  if (!(alpha.target == beta.source)) throw CategoryError("vertical composite: mismatched functors");
  std::vector<int> comps;
  for (std::size_t o = 0; o < alpha.components.size(); ++o)
    comps.push_back(alpha.source.target->compose(beta.components[o], alpha.components[o]));
  return NatTransform{alpha.source, beta.target, std::move(comps)};
}

bool is_natural_iso(const NatTransform& t) {
  for (int a : t.components)
    if (!t.source.target->is_iso(a)) return false;
  return true;
}

}  // namespace relsite
