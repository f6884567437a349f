#include "relsite/kernel.hpp"

#include <algorithm>
#include <numeric>

namespace relsite {

namespace {

struct UnionFind {
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

}  // namespace

CommaCategory comma_category(const Functor& f, const Functor& g) {
  if (!same_category(f.target, g.target)) throw CategoryError("comma category: functors have different targets");
  const Category& c = *f.target;
  const Category& d = *f.source;
  const Category& d2 = *g.source;
  CommaCategory out;
  CategoryBuilder b;
  std::map<std::tuple<int, int, int>, int> object_of;
  for (int x = 0; x < d.num_objects(); ++x)
    for (int y = 0; y < d2.num_objects(); ++y)
      for (int u : c.hom(f.obj(x), g.obj(y))) {
        int o = b.add_object("(" + d.object_name(x) + "," + d2.object_name(y) + "," + c.arrow_name(u) + ")");
        out.triples.emplace_back(x, y, u);
        object_of[{x, y, u}] = o;
      }
  // arrows (a, b) between triples with G(b)∘u1 = u2∘F(a)
  std::vector<std::pair<int, int>> parts;
  std::map<std::tuple<int, int, int, int>, int> arrow_of;  // (src, tgt, a, b)
  const int n = b.num_objects();
  for (int s = 0; s < n; ++s) {
    auto [x1, y1, u1] = out.triples[s];
    for (int t = 0; t < n; ++t) {
      auto [x2, y2, u2] = out.triples[t];
      for (int a : d.hom(x1, x2))
        for (int bb : d2.hom(y1, y2)) {
          if (c.compose(g.arr(bb), u1) != c.compose(u2, f.arr(a))) continue;
          int id = b.add_arrow("[" + d.arrow_name(a) + "," + d2.arrow_name(bb) + "]" + std::to_string(s) + ">" +
                                   std::to_string(t),
                               s, t);
          parts.emplace_back(a, bb);
          arrow_of[{s, t, a, bb}] = id;
          if (s == t && d.is_identity(a) && d2.is_identity(bb)) b.set_identity(s, id);
        }
    }
  }
  out.category = b.build_with([&](int g2, int f2) {
    auto [a1, b1] = parts[f2];
    auto [a2, b2] = parts[g2];
    return arrow_of.at({b.src(f2), b.tgt(g2), d.compose(a2, a1), d2.compose(b2, b1)});
  });
  std::vector<int> lo, ro, la, ra;
  for (auto [x, y, u] : out.triples) {
    lo.push_back(x);
    ro.push_back(y);
  }
  for (auto [a, bb] : parts) {
    la.push_back(a);
    ra.push_back(bb);
  }
  out.left = validate_functor(out.category, f.source, lo, la);
  out.right = validate_functor(out.category, g.source, ro, ra);
  return out;
}

std::vector<int> connected_components(const Category& c) {
  UnionFind uf(c.num_objects());
  for (int a = 0; a < c.num_arrows(); ++a) uf.unite(c.src(a), c.tgt(a));
  std::vector<int> label(c.num_objects(), -1), root_label(c.num_objects(), -1);
  int next = 0;
  for (int o = 0; o < c.num_objects(); ++o) {
    int r = uf.find(o);
    if (root_label[r] < 0) root_label[r] = next++;
    label[o] = root_label[r];
  }
  return label;
}

std::vector<std::vector<int>> component_partition(const Category& c) {
  auto label = connected_components(c);
  int k = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  std::vector<std::vector<int>> parts(k);
  for (int o = 0; o < c.num_objects(); ++o) parts[label[o]].push_back(o);
  return parts;
}

int ElementsCategory::object_of_arrow(int f) const {
  auto it = std::find(arrow_of_object.begin(), arrow_of_object.end(), f);
  return it == arrow_of_object.end() ? -1 : static_cast<int>(it - arrow_of_object.begin());
}

ElementsCategory elements_of_arrows(const CategoryPtr& cp, int apex, const ArrowSet& arrows) {
  const Category& c = *cp;
  ElementsCategory out;
  CategoryBuilder b;
  std::vector<int> obj_of(c.num_arrows(), -1);
  arrows.for_each([&](int f) {
    if (c.tgt(f) != apex) throw CategoryError("arrow " + c.arrow_name(f) + " does not target the apex");
    obj_of[f] = b.add_object(c.arrow_name(f));
    out.arrow_of_object.push_back(f);
  });
  std::vector<int> underlying;
  for (int s = 0; s < b.num_objects(); ++s) {
    int f = out.arrow_of_object[s];
    for (int t = 0; t < b.num_objects(); ++t) {
      int g = out.arrow_of_object[t];
      for (int h : c.hom(c.src(f), c.src(g))) {
        if (c.compose(g, h) != f) continue;
        int id = b.add_arrow(c.arrow_name(h) + ":" + c.arrow_name(f) + ">" + c.arrow_name(g), s, t);
        underlying.push_back(h);
        out.arrow_lookup[{h, t}] = id;
        if (s == t && c.is_identity(h)) b.set_identity(s, id);
      }
    }
  }
  out.category = b.build_with([&](int g2, int f2) {
    return out.arrow_lookup.at({c.compose(underlying[g2], underlying[f2]), b.tgt(g2)});
  });
  std::vector<int> po;
  for (int f : out.arrow_of_object) po.push_back(c.src(f));
  out.projection = validate_functor(out.category, cp, po, underlying);
  return out;
}

ElementsCategory slice_category(const CategoryPtr& c, int apex) {
  ArrowSet all;
  for (int f : c->arrows_into(apex)) all.insert(f);
  return elements_of_arrows(c, apex, all);
}

Functor slice_functor(const Functor& f, int apex, const ElementsCategory& src, const ElementsCategory& tgt) {
  const Category& s = *src.category;
  std::vector<int> om, am;
  for (int o = 0; o < s.num_objects(); ++o) {
    int u = src.arrow_of_object[o];
    if (f.source->tgt(u) != apex) throw CategoryError("slice functor: wrong apex");
    int image = tgt.object_of_arrow(f.arr(u));
    if (image < 0) throw CategoryError("slice functor: image not in target slice");
    om.push_back(image);
  }
  for (int a = 0; a < s.num_arrows(); ++a) {
    int h = src.projection.arr(a);
    am.push_back(tgt.morphism(f.arr(h), om[s.tgt(a)]));
  }
  return validate_functor(src.category, tgt.category, om, am);
}

bool check_adjunction(const Functor& left, const Functor& right, const NatTransform& unit,
                      const NatTransform& counit) {
  if (!same_category(left.target, right.source) || !same_category(right.target, left.source))
    throw CategoryError("adjunction: functor endpoints do not match");
  const Functor rl = compose(right, left);
  const Functor lr = compose(left, right);
  if (!(unit.source == identity_functor(left.source)) || !(unit.target == rl))
    throw CategoryError("adjunction: unit must go from Id to R∘L");
  if (!(counit.source == lr) || !(counit.target == identity_functor(left.target)))
    throw CategoryError("adjunction: counit must go from L∘R to Id");
  const Category& x = *left.source;
  const Category& y = *left.target;
  for (int o = 0; o < x.num_objects(); ++o) {
    // ε_{Lx} ∘ L(η_x) = id_{Lx}
    if (y.compose(counit.at(left.obj(o)), left.arr(unit.at(o))) != y.identity(left.obj(o))) return false;
  }
  for (int o = 0; o < y.num_objects(); ++o) {
    // R(ε_y) ∘ η_{Ry} = id_{Ry}
    if (x.compose(right.arr(counit.at(o)), unit.at(right.obj(o))) != x.identity(right.obj(o))) return false;
  }
  return true;
}

Adjunction compose_adjunctions(const Adjunction& inner, const Adjunction& outer) {
  const Functor left = compose(outer.left, inner.left);
  const Functor right = compose(inner.right, outer.right);
  const Category& x = *inner.left.source;
  const Category& z = *outer.left.target;
  std::vector<int> unit, counit;
  for (int o = 0; o < x.num_objects(); ++o)
    unit.push_back(x.compose(inner.right.arr(outer.unit.at(inner.left.obj(o))), inner.unit.at(o)));
  for (int o = 0; o < z.num_objects(); ++o)
    counit.push_back(z.compose(outer.counit.at(o), outer.left.arr(inner.counit.at(outer.right.obj(o)))));
  return Adjunction{left, right,
                    validate_natural(identity_functor(left.source), compose(right, left), unit),
                    validate_natural(compose(left, right), identity_functor(left.target), counit)};
}

EquivalenceCheck is_equivalence(const Functor& f) {
  const Category& s = *f.source;
  const Category& t = *f.target;
  EquivalenceCheck out;
  for (int x = 0; x < s.num_objects(); ++x)
    for (int y = 0; y < s.num_objects(); ++y) {
      auto src_hom = s.hom(x, y);
      auto tgt_hom = t.hom(f.obj(x), f.obj(y));
      std::vector<int> images;
      for (int a : src_hom) images.push_back(f.arr(a));
      std::sort(images.begin(), images.end());
      if (std::adjacent_find(images.begin(), images.end()) != images.end()) {
        out.reason = "not faithful on hom(" + s.object_name(x) + ", " + s.object_name(y) + ")";
        return out;
      }
      if (images.size() != tgt_hom.size()) {
        out.reason = "not full on hom(" + s.object_name(x) + ", " + s.object_name(y) + ")";
        return out;
      }
    }
  for (int o = 0; o < t.num_objects(); ++o) {
    bool found = false;
    for (int x = 0; x < s.num_objects() && !found; ++x)
      for (int a : t.hom(f.obj(x), o))
        if (t.is_iso(a)) {
          out.essential_image.emplace_back(x, a);
          found = true;
          break;
        }
    if (!found) {
      out.essential_image.clear();
      out.reason = "not essentially surjective at " + t.object_name(o);
      return out;
    }
  }
  out.holds = true;
  return out;
}

std::optional<NatTransform> find_natural_iso(const Functor& h1, const Functor& h2) {
  if (!same_category(h1.source, h2.source) || !same_category(h1.target, h2.target)) return std::nullopt;
  const Category& s = *h1.source;
  const Category& t = *h1.target;
  const int n = s.num_objects();
  std::vector<std::vector<int>> candidates(n);
  for (int o = 0; o < n; ++o)
    for (int a : t.hom(h1.obj(o), h2.obj(o)))
      if (t.is_iso(a)) candidates[o].push_back(a);
  std::vector<int> comp(n, -1);
  auto consistent = [&](int o) {
    for (int f = 0; f < s.num_arrows(); ++f) {
      int a = s.src(f), b = s.tgt(f);
      if (a > o || b > o || (a != o && b != o)) continue;
      if (t.compose(h2.arr(f), comp[a]) != t.compose(comp[b], h1.arr(f))) return false;
    }
    return true;
  };
  auto search = [&](auto&& self, int o) -> bool {
    if (o == n) return true;
    for (int a : candidates[o]) {
      comp[o] = a;
      if (consistent(o) && self(self, o + 1)) return true;
    }
    comp[o] = -1;
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return validate_natural(h1, h2, comp);
}

Subcategory full_subcategory(const CategoryPtr& cp, const std::vector<int>& objects) {
  const Category& c = *cp;
  CategoryBuilder b;
  std::vector<int> local(c.num_objects(), -1);
  for (int o : objects) local[o] = b.add_object(c.object_name(o));
  std::vector<int> global_arrow;
  std::vector<int> local_arrow(c.num_arrows(), -1);
  for (int x : objects)
    for (int y : objects)
      for (int a : c.hom(x, y)) {
        local_arrow[a] = b.add_arrow(c.arrow_name(a), local[x], local[y]);
        global_arrow.push_back(a);
        if (c.is_identity(a)) b.set_identity(local[x], local_arrow[a]);
      }
  auto sub = b.build_with([&](int g, int f) { return local_arrow[c.compose(global_arrow[g], global_arrow[f])]; });
  return Subcategory{sub, validate_functor(sub, cp, objects, global_arrow)};
}

bool is_terminal(const Category& c, int o) {
  for (int x = 0; x < c.num_objects(); ++x)
    if (c.hom(x, o).size() != 1) return false;
  return true;
}

std::optional<int> find_terminal(const Category& c) {
  for (int o = 0; o < c.num_objects(); ++o)
    if (is_terminal(c, o)) return o;
  return std::nullopt;
}

bool is_initial(const Category& c, int o) {
  for (int x = 0; x < c.num_objects(); ++x)
    if (c.hom(o, x).size() != 1) return false;
  return true;
}

std::optional<int> find_initial(const Category& c) {
  for (int o = 0; o < c.num_objects(); ++o)
    if (is_initial(c, o)) return o;
  return std::nullopt;
}

bool is_product_cone(const Category& c, const ProductCone& cone) {
  int a = c.tgt(cone.first), b = c.tgt(cone.second);
  if (c.src(cone.first) != cone.apex || c.src(cone.second) != cone.apex) return false;
  for (int x = 0; x < c.num_objects(); ++x)
    for (int f : c.hom(x, a))
      for (int g : c.hom(x, b)) {
        int count = 0;
        for (int h : c.hom(x, cone.apex))
          if (c.compose(cone.first, h) == f && c.compose(cone.second, h) == g) ++count;
        if (count != 1) return false;
      }
  return true;
}

std::optional<ProductCone> find_product(const Category& c, int a, int b) {
  for (int p = 0; p < c.num_objects(); ++p)
    for (int f : c.hom(p, a))
      for (int g : c.hom(p, b)) {
        ProductCone cone{p, f, g};
        if (is_product_cone(c, cone)) return cone;
      }
  return std::nullopt;
}

bool is_equalizer(const Category& c, int f, int g, const EqualizerCone& cone) {
  if (c.tgt(cone.arrow) != c.src(f) || c.src(cone.arrow) != cone.apex) return false;
  if (c.compose(f, cone.arrow) != c.compose(g, cone.arrow)) return false;
  for (int z = 0; z < c.num_objects(); ++z)
    for (int k : c.hom(z, c.src(f))) {
      if (c.compose(f, k) != c.compose(g, k)) continue;
      int count = 0;
      for (int h : c.hom(z, cone.apex))
        if (c.compose(cone.arrow, h) == k) ++count;
      if (count != 1) return false;
    }
  return true;
}

std::optional<EqualizerCone> find_equalizer(const Category& c, int f, int g) {
  for (int e = 0; e < c.num_objects(); ++e)
    for (int m : c.hom(e, c.src(f))) {
      EqualizerCone cone{e, m};
      if (is_equalizer(c, f, g, cone)) return cone;
    }
  return std::nullopt;
}

bool has_finite_limits(const Category& c) {
  if (!find_terminal(c)) return false;
  for (int a = 0; a < c.num_objects(); ++a)
    for (int b = a; b < c.num_objects(); ++b)
      if (!find_product(c, a, b)) return false;
  for (int x = 0; x < c.num_objects(); ++x)
    for (int y = 0; y < c.num_objects(); ++y) {
      auto h = c.hom(x, y);
      for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j)
          if (!find_equalizer(c, h[i], h[j])) return false;
    }
  return true;
}

bool preserves_finite_limits(const Functor& f) {
  const Category& s = *f.source;
  const Category& t = *f.target;
  auto term = find_terminal(s);
  if (!term || !is_terminal(t, f.obj(*term))) return false;
  for (int a = 0; a < s.num_objects(); ++a)
    for (int b = a; b < s.num_objects(); ++b) {
      auto cone = find_product(s, a, b);
      if (!cone) return false;
      if (!is_product_cone(t, {f.obj(cone->apex), f.arr(cone->first), f.arr(cone->second)})) return false;
    }
  for (int x = 0; x < s.num_objects(); ++x)
    for (int y = 0; y < s.num_objects(); ++y) {
      auto h = s.hom(x, y);
      for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = i + 1; j < h.size(); ++j) {
          auto cone = find_equalizer(s, h[i], h[j]);
          if (!cone) return false;
          if (!is_equalizer(t, f.arr(h[i]), f.arr(h[j]), {f.obj(cone->apex), f.arr(cone->arrow)})) return false;
        }
    }
  return true;
}

}  // namespace relsite
