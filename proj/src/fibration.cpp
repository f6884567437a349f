#include "relsite/fibration.hpp"

#include <algorithm>
#include <sstream>

namespace relsite {

IndexedCategory validate_indexed(CategoryPtr base, std::vector<CategoryPtr> fibers, std::vector<Functor> restrictions) {
  const Category& b = *base;
  if (static_cast<int>(fibers.size()) != b.num_objects()) throw CategoryError("indexed category: missing fiber");
  if (static_cast<int>(restrictions.size()) != b.num_arrows())
    throw CategoryError("indexed category: missing restriction");
  for (int f = 0; f < b.num_arrows(); ++f) {
    const Functor& r = restrictions[f];
    if (!same_category(r.source, fibers[b.tgt(f)]) || !same_category(r.target, fibers[b.src(f)]))
      throw CategoryError("restriction along " + b.arrow_name(f) + " has the wrong endpoints");
  }
  for (int o = 0; o < b.num_objects(); ++o)
    if (!(restrictions[b.identity(o)] == identity_functor(fibers[o])))
      throw CategoryError("restriction along " + b.arrow_name(b.identity(o)) + " is not the identity");
  for (int f = 0; f < b.num_arrows(); ++f)
    for (int g : b.arrows_out(b.tgt(f))) {
      const Functor expected = compose(restrictions[f], restrictions[g]);
      const Functor& actual = restrictions[b.compose(g, f)];
      if (actual.objects != expected.objects || actual.arrows != expected.arrows)
        throw CategoryError("restriction not functorial at (" + b.arrow_name(g) + ", " + b.arrow_name(f) + ")");
    }
  return IndexedCategory{std::move(base), std::move(fibers), std::move(restrictions)};
}

IndexedCategory constant_indexed(const CategoryPtr& base, const CategoryPtr& fiber) {
  std::vector<CategoryPtr> fibers(base->num_objects(), fiber);
  std::vector<Functor> restrictions(base->num_arrows(), identity_functor(fiber));
  return IndexedCategory{base, std::move(fibers), std::move(restrictions)};
}

IndexedCategory representable_indexed(const CategoryPtr& base, int c) {
  const Category& b = *base;
  std::vector<CategoryPtr> fibers;
  for (int o = 0; o < b.num_objects(); ++o) {
    CategoryBuilder builder;
    for (int u : b.hom(o, c)) builder.add_object_with_identity(b.arrow_name(u), "id_" + b.arrow_name(u));
    fibers.push_back(builder.build());
  }
  std::vector<Functor> restrictions;
  for (int f = 0; f < b.num_arrows(); ++f) {
    auto from = b.hom(b.tgt(f), c);
    auto to = b.hom(b.src(f), c);
    std::vector<int> objects;
    for (int u : from) {
      int v = b.compose(u, f);
      objects.push_back(static_cast<int>(std::find(to.begin(), to.end(), v) - to.begin()));
    }
    // in a discrete category built as above, arrow i is the identity of object i
    restrictions.push_back(validate_functor(fibers[b.tgt(f)], fibers[b.src(f)], objects, objects));
  }
  return validate_indexed(base, std::move(fibers), std::move(restrictions));
}

IndexedCategory precompose(const IndexedCategory& dix, const Functor& f) {
  if (!same_category(f.target, dix.base)) throw CategoryError("precompose: functor does not land in the base");
  IndexedCategory out;
  out.base = f.source;
  for (int c = 0; c < f.source->num_objects(); ++c) out.fibers.push_back(dix.fibers[f.obj(c)]);
  for (int a = 0; a < f.source->num_arrows(); ++a) out.restrictions.push_back(dix.restrictions[f.arr(a)]);
  return out;
}

bool operator==(const IndexedCategory& a, const IndexedCategory& b) {
  if (!same_category(a.base, b.base) || a.fibers.size() != b.fibers.size()) return false;
  for (std::size_t i = 0; i < a.fibers.size(); ++i)
    if (!same_category(a.fibers[i], b.fibers[i])) return false;
  for (std::size_t i = 0; i < a.restrictions.size(); ++i)
    if (!(a.restrictions[i] == b.restrictions[i])) return false;
  return true;
}

bool is_cartesian_arrow(const Functor& p, int f, CartesianMode) {
  const Category& e = *p.source;
  const Category& b = *p.target;
  const int d1 = e.src(f), d = e.tgt(f);
  for (int g : e.arrows_into(d)) {
    const int d2 = e.src(g);
    for (int h : b.hom(p.obj(d2), p.obj(d1))) {
      if (b.compose(p.arr(f), h) != p.arr(g)) continue;
      int count = 0;
      for (int g1 : e.hom(d2, d1))
        if (p.arr(g1) == h && e.compose(f, g1) == g) ++count;
      if (count != 1) return false;
    }
  }
  return true;
}

FibrationBundle make_bundle(const Functor& projection) {
  FibrationBundle out{projection.source, projection, {}, std::nullopt};
  for (int a = 0; a < projection.source->num_arrows(); ++a)
    if (is_cartesian_arrow(projection, a)) out.cartesian.insert(a);
  return out;
}

FibrationCheck is_fibration(const Functor& p, CartesianMode mode) {
  const Category& e = *p.source;
  const Category& b = *p.target;
  std::vector<char> cartesian(e.num_arrows());
  for (int a = 0; a < e.num_arrows(); ++a) cartesian[a] = is_cartesian_arrow(p, a, mode);
  FibrationCheck out;
  for (int d = 0; d < e.num_objects(); ++d)
    for (int f : b.arrows_into(p.obj(d))) {
      bool found = false;
      for (int l : e.arrows_into(d)) {
        if (!cartesian[l]) continue;
        if (p.arr(l) == f) {
          found = true;
        } else if (mode == CartesianMode::street) {
          for (int s : b.hom(p.obj(e.src(l)), b.src(f)))
            if (b.is_iso(s) && b.compose(f, s) == p.arr(l)) found = true;
        }
        if (found) break;
      }
      if (!found) {
        out.holds = false;
        out.object = d;
        out.base_arrow = f;
        out.message = "no cartesian lift of " + b.arrow_name(f) + " at " + e.object_name(d);
        return out;
      }
    }
  return out;
}

Grothendieck grothendieck(const IndexedCategory& cix) {
  const Category& base = *cix.base;
  Grothendieck g;
  g.indexed = cix;
  CategoryBuilder b;
  g.object_index.resize(base.num_objects());
  for (int c = 0; c < base.num_objects(); ++c) {
    const Category& fib = cix.fiber(c);
    for (int x = 0; x < fib.num_objects(); ++x) {
      g.object_index[c].push_back(b.add_object("(" + fib.object_name(x) + "," + base.object_name(c) + ")"));
      g.object_pair.emplace_back(x, c);
    }
  }
  for (int f = 0; f < base.num_arrows(); ++f) {
    const int c = base.src(f), c2 = base.tgt(f);
    const Category& fib = cix.fiber(c);
    const Functor& r = cix.restriction(f);
    const Category& fib2 = cix.fiber(c2);
    for (int x2 = 0; x2 < fib2.num_objects(); ++x2) {
      const int y = r.obj(x2);
      const bool shared = std::count(r.objects.begin(), r.objects.end(), y) > 1;
      for (int x = 0; x < fib.num_objects(); ++x)
        for (int u : fib.hom(x, y)) {
          std::string name = "(" + fib.arrow_name(u) + "," + base.arrow_name(f);
          if (shared) name += ";" + fib2.object_name(x2);
          name += ")";
          int a = b.add_arrow(std::move(name), g.object_of(x, c), g.object_of(x2, c2));
          g.arrow_pair.emplace_back(u, f);
          g.arrow_index[{u, f, x2}] = a;
          if (base.is_identity(f) && x == x2 && fib.is_identity(u)) b.set_identity(g.object_of(x, c), a);
        }
    }
  }
  auto target_fiber_object = [&](int a) { return g.object_pair[b.tgt(a)].first; };
  auto total = b.build_with([&](int second, int first) {
    auto [u, f] = g.arrow_pair[first];
    auto [u2, f2] = g.arrow_pair[second];
    const Category& fib = cix.fiber(base.src(f));
    int v = fib.compose(cix.restriction(f).arr(u2), u);
    return g.arrow_index.at({v, base.compose(f2, f), target_fiber_object(second)});
  });
  std::vector<int> po, pa;
  for (auto [x, c] : g.object_pair) po.push_back(c);
  for (auto [u, f] : g.arrow_pair) pa.push_back(f);
  g.bundle = make_bundle(validate_functor(total, cix.base, po, pa));
  return g;
}

bool is_cartesian_by_fiber_iso(const Grothendieck& g, int arrow) {
  auto [u, f] = g.arrow_pair[arrow];
  return g.indexed.fiber(g.indexed.base->src(f)).is_iso(u);
}

bool is_morphism_of_fibrations(const Functor& a, const Functor& b, const FibrationBundle& src,
                               const FibrationBundle& tgt, const NatTransform& square) {
  if (!same_category(a.source, src.total) || !same_category(a.target, tgt.total) ||
      !same_category(b.source, src.projection.target) || !same_category(b.target, tgt.projection.target))
    throw CategoryError("morphism of fibrations: square has mismatched endpoints");
  const Functor top = compose(tgt.projection, a);
  const Functor bottom = compose(b, src.projection);
  if (square.source.objects != top.objects || square.source.arrows != top.arrows ||
      square.target.objects != bottom.objects || square.target.arrows != bottom.arrows)
    throw CategoryError("morphism of fibrations: 2-cell is not p'A => Bp");
  validate_natural(top, bottom, square.components);
  if (!is_natural_iso(square)) return false;
  bool preserved = true;
  src.cartesian.for_each([&](int arrow) { preserved = preserved && tgt.cartesian.contains(a.arr(arrow)); });
  return preserved;
}

bool is_morphism_of_fibrations(const Functor& a, const Functor& b, const FibrationBundle& src,
                               const FibrationBundle& tgt) {
  const Functor top = compose(tgt.projection, a);
  const Functor bottom = compose(b, src.projection);
  if (top.objects != bottom.objects || top.arrows != bottom.arrows)
    throw CategoryError("morphism of fibrations: square does not commute");
  return is_morphism_of_fibrations(a, b, src, tgt, identity_natural(top));
}

Functor fiber_functor(const Functor& a, const Functor& b, const Grothendieck& src, const Grothendieck& tgt, int c) {
  const Category& fib = src.indexed.fiber(c);
  const int bc = b.obj(c);
  const int id_bc = tgt.indexed.base->identity(bc);
  std::vector<int> objects, arrows;
  for (int x = 0; x < fib.num_objects(); ++x) {
    auto [y, c2] = tgt.object_pair[a.obj(src.object_of(x, c))];
    if (c2 != bc) throw CategoryError("fiber_functor: square does not commute at " + fib.object_name(x));
    objects.push_back(y);
  }
  const int id_c = src.indexed.base->identity(c);
  for (int u = 0; u < fib.num_arrows(); ++u) {
    auto [v, f] = tgt.arrow_pair[a.arr(src.arrow_of(u, id_c, fib.tgt(u)))];
    if (f != id_bc) throw CategoryError("fiber_functor: vertical arrow " + fib.arrow_name(u) + " leaves the fiber");
    arrows.push_back(v);
  }
  return validate_functor(src.indexed.fibers[c], tgt.indexed.fibers[bc], objects, arrows);
}

Topology giraud_topology(const Grothendieck& g, const Topology& j) {
  if (!same_category(j.base(), g.indexed.base)) throw CategoryError("giraud_topology: J lives on another category");
  const Category& base = *g.indexed.base;
  Coverage cov(g.total());
  std::vector<std::vector<ArrowSet>> minimal(base.num_objects());
  for (int c = 0; c < base.num_objects(); ++c) minimal[c] = j.minimal_covers(c);
  for (int o = 0; o < g.total()->num_objects(); ++o) {
    auto [x, c] = g.object_pair[o];
    for (const auto& s : minimal[c]) {
      std::vector<int> family;
      s.for_each([&](int f) {
        const int y = g.indexed.restriction(f).obj(x);
        family.push_back(g.arrow_of(g.indexed.fiber(base.src(f)).identity(y), f, x));
      });
      cov.add(o, std::move(family));
    }
  }
  return saturate(cov);
}

DirectImage direct_image(const Grothendieck& dix, const Functor& f) {
  DirectImage out{grothendieck(precompose(dix.indexed, f)), {}};
  const Grothendieck& p = out.pulled;
  std::vector<int> objects, arrows;
  for (auto [x, c] : p.object_pair) objects.push_back(dix.object_of(x, f.obj(c)));
  const Category& total = *p.total();
  for (int a = 0; a < total.num_arrows(); ++a) {
    auto [u, g] = p.arrow_pair[a];
    arrows.push_back(dix.arrow_of(u, f.arr(g), p.object_pair[total.tgt(a)].first));
  }
  out.q = validate_functor(p.total(), dix.total(), objects, arrows);
  return out;
}

bool q_reflects_cartesian(const DirectImage& di, const Grothendieck& target) {
  for (int a = 0; a < di.pulled.total()->num_arrows(); ++a)
    if (di.pulled.bundle.cartesian.contains(a) != target.bundle.cartesian.contains(di.q.arr(a))) return false;
  return true;
}

InverseImage inverse_image_adjoint(const Grothendieck& cix, const Adjunction& adj) {
  if (!same_category(adj.left.target, cix.indexed.base))
    throw CategoryError("inverse image: left adjoint does not land in the base");
  if (!check_adjunction(adj)) throw CategoryError("inverse image: adjunction data invalid");
  const Category& c = *cix.indexed.base;
  InverseImage out{grothendieck(precompose(cix.indexed, adj.left)), {}, {}, {}};
  const Grothendieck& p = out.pulled;
  const Category& pt = *p.total();
  const Category& ct = *cix.total();

  std::vector<int> lo, la;
  for (auto [x, d] : p.object_pair) lo.push_back(cix.object_of(x, adj.left.obj(d)));
  for (int a = 0; a < pt.num_arrows(); ++a) {
    auto [u, g] = p.arrow_pair[a];
    la.push_back(cix.arrow_of(u, adj.left.arr(g), p.object_pair[pt.tgt(a)].first));
  }
  out.left = validate_functor(p.total(), cix.total(), lo, la);

  auto eps = [&](int obj) { return cix.indexed.restriction(adj.counit.at(obj)); };
  std::vector<int> ro, ra;
  for (auto [x, cc] : cix.object_pair) ro.push_back(p.object_of(eps(cc).obj(x), adj.right.obj(cc)));
  for (int a = 0; a < ct.num_arrows(); ++a) {
    auto [u, f] = cix.arrow_pair[a];
    auto [x2, c2] = cix.object_pair[ct.tgt(a)];
    ra.push_back(p.arrow_of(eps(c.src(f)).arr(u), adj.right.arr(f), eps(c2).obj(x2)));
  }
  out.right = validate_functor(cix.total(), p.total(), ro, ra);

  std::vector<int> unit, counit;
  for (auto [x, d] : p.object_pair) {
    const int ld = adj.left.obj(d);
    const int x2 = eps(ld).obj(x);
    unit.push_back(p.arrow_of(p.indexed.fiber(d).identity(x), adj.unit.at(d), x2));
  }
  for (auto [x, cc] : cix.object_pair) {
    const int y = eps(cc).obj(x);
    const int lrc = adj.left.obj(adj.right.obj(cc));
    counit.push_back(cix.arrow_of(cix.indexed.fiber(lrc).identity(y), adj.counit.at(cc), x));
  }
  out.comparison = Adjunction{out.left, out.right,
                              validate_natural(identity_functor(p.total()), compose(out.right, out.left), unit),
                              validate_natural(compose(out.left, out.right), identity_functor(cix.total()), counit)};
  if (!check_adjunction(out.comparison)) throw CategoryError("inverse image: comparison functors are not adjoint");
  return out;
}

StructureFunctor structure_functor(const Grothendieck& cix, const Adjunction& adj) {
  StructureFunctor out{inverse_image_adjoint(cix, adj), {}, {}, {}};
  out.twice = direct_image(out.inverse.pulled, adj.right);
  const Grothendieck& t = out.twice.pulled;
  const Category& ct = *cix.total();
  auto eps = [&](int obj) { return cix.indexed.restriction(adj.counit.at(obj)); };
  std::vector<int> zo, za;
  for (auto [x, c] : cix.object_pair) zo.push_back(t.object_of(eps(c).obj(x), c));
  for (int a = 0; a < ct.num_arrows(); ++a) {
    auto [u, f] = cix.arrow_pair[a];
    auto [x2, c2] = cix.object_pair[ct.tgt(a)];
    za.push_back(t.arrow_of(eps(cix.indexed.base->src(f)).arr(u), f, eps(c2).obj(x2)));
  }
  out.zeta = validate_functor(cix.total(), t.total(), zo, za);
  out.composite = compose(out.twice.q, out.zeta);
  return out;
}

namespace {

bool same_maps(const Functor& a, const Functor& b) { return a.objects == b.objects && a.arrows == b.arrows; }

}  // namespace

BaseChangeIso compose_direct_images(const Grothendieck& dix, const Functor& f, const Functor& f2) {
  BaseChangeIso out;
  auto outer = direct_image(dix, f2);
  auto stepwise = direct_image(outer.pulled, f);
  auto direct = direct_image(dix, compose(f2, f));
  if (!(stepwise.pulled.indexed == direct.pulled.indexed)) {
    out.reason = "indexed tables differ";
    return out;
  }
  if (!stepwise.pulled.total()->same_as(*direct.pulled.total())) {
    out.reason = "total categories differ";
    return out;
  }
  if (!same_maps(compose(outer.q, stepwise.q), direct.q)) {
    out.reason = "projections differ";
    return out;
  }
  out.found = true;
  out.isos.push_back(identity_natural(direct.q));
  return out;
}

BaseChangeIso compose_inverse_images(const Grothendieck& cix, const Adjunction& outer, const Adjunction& inner) {
  BaseChangeIso out;
  auto first = inverse_image_adjoint(cix, outer);
  auto second = inverse_image_adjoint(first.pulled, inner);
  auto whole = inverse_image_adjoint(cix, compose_adjunctions(inner, outer));
  if (!(second.pulled.indexed == whole.pulled.indexed)) {
    out.reason = "indexed tables differ";
    return out;
  }
  auto left = find_natural_iso(whole.left, compose(first.left, second.left));
  if (!left) {
    out.reason = "no natural iso between the left comparisons";
    return out;
  }
  auto right = find_natural_iso(whole.right, compose(second.right, first.right));
  if (!right) {
    out.reason = "no natural iso between the right comparisons";
    return out;
  }
  out.found = true;
  out.isos = {*left, *right};
  return out;
}

BaseChangeIso compose_slices(const Functor& f, const Functor& f2, int c) {
  BaseChangeIso out;
  if (!same_category(f.target, f2.source)) throw CategoryError("compose_slices: functors are not composable");
  const int fc = f.obj(c);
  auto s0 = slice_category(f.source, c);
  auto s1 = slice_category(f.target, fc);
  auto s2 = slice_category(f2.target, f2.obj(fc));
  auto whole = slice_functor(compose(f2, f), c, s0, s2);
  auto stepwise = compose(slice_functor(f2, fc, s1, s2), slice_functor(f, c, s0, s1));
  auto iso = find_natural_iso(whole, stepwise);
  if (!iso) {
    out.reason = "no natural iso between the slice functors";
    return out;
  }
  out.found = true;
  out.isos.push_back(*iso);
  return out;
}

bool is_cartesian_fibration(const IndexedCategory& cix) {
  for (const auto& fib : cix.fibers)
    if (!has_finite_limits(*fib)) return false;
  for (const auto& r : cix.restrictions)
    if (!preserves_finite_limits(r)) return false;
  return true;
}

FibrationBundle codomain_fibration(const CategoryPtr& c) {
  auto arr = comma_category(identity_functor(c), identity_functor(c));
  return make_bundle(arr.right);
}

std::string describe(const Grothendieck& g) {
  const Category& t = *g.total();
  std::vector<std::string> objects, arrows;
  for (int o = 0; o < t.num_objects(); ++o) objects.push_back(t.object_name(o));
  for (int a = 0; a < t.num_arrows(); ++a)
    arrows.push_back(t.arrow_name(a) + ": " + t.object_name(t.src(a)) + " -> " + t.object_name(t.tgt(a)) +
                     (g.bundle.cartesian.contains(a) ? " cartesian" : ""));
  std::sort(objects.begin(), objects.end());
  std::sort(arrows.begin(), arrows.end());
  std::ostringstream os;
  os << "objects " << objects.size() << '\n';
  for (const auto& o : objects) os << "  " << o << '\n';
  os << "arrows " << arrows.size() << '\n';
  for (const auto& a : arrows) os << "  " << a << '\n';
  return os.str();
}

}  // namespace relsite

namespace relsite {

Functor total_functor(const Grothendieck& src, const Grothendieck& tgt, const std::vector<Functor>& alpha) {
  const IndexedCategory& a = src.indexed;
  const IndexedCategory& b = tgt.indexed;
  if (!same_category(a.base, b.base)) throw CategoryError("total_functor: different bases");
  const Category& base = *a.base;
  if (static_cast<int>(alpha.size()) != base.num_objects()) throw CategoryError("total_functor: one component per base object");
  for (int c = 0; c < base.num_objects(); ++c)
    if (!same_category(alpha[c].source, a.fibers[c]) || !same_category(alpha[c].target, b.fibers[c]))
      throw CategoryError("total_functor: component at " + base.object_name(c) + " has wrong endpoints");
  for (int f = 0; f < base.num_arrows(); ++f) {
    const Functor lhs = compose(b.restriction(f), alpha[base.tgt(f)]);
    const Functor rhs = compose(alpha[base.src(f)], a.restriction(f));
    if (lhs.objects != rhs.objects || lhs.arrows != rhs.arrows)
      throw CategoryError("total_functor: not natural at " + base.arrow_name(f));
  }
  std::vector<int> objects(src.total()->num_objects()), arrows(src.total()->num_arrows());
  for (int o = 0; o < src.total()->num_objects(); ++o) {
    auto [x, c] = src.object_pair[o];
    objects[o] = tgt.object_of(alpha[c].obj(x), c);
  }
  for (int g = 0; g < src.total()->num_arrows(); ++g) {
    auto [u, f] = src.arrow_pair[g];
    const int x2 = src.object_pair[src.total()->tgt(g)].first;
    arrows[g] = tgt.arrow_of(alpha[base.src(f)].arr(u), f, alpha[base.tgt(f)].obj(x2));
  }
  return validate_functor(src.total(), tgt.total(), objects, arrows);
}

}  // namespace relsite
