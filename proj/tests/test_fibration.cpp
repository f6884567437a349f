#include "doctest.h"
#include "relsite/samples.hpp"

using namespace relsite;

namespace {

int arrow(const Category& c, const char* name) { return *c.find_arrow(name); }
int object(const Category& c, const char* name) { return *c.find_object(name); }

bool maps_identity(const Functor& f) {
  for (int o = 0; o < static_cast<int>(f.objects.size()); ++o)
    if (f.objects[o] != o) return false;
  for (int a = 0; a < static_cast<int>(f.arrows.size()); ++a)
    if (f.arrows[a] != a) return false;
  return true;
}

// Comorphism condition straight from its statement: every J-cover S on p(d)
// contains p(S') for some K-cover S' on d.
bool comorphism_oracle(const Functor& p, const Topology& k, const Topology& j) {
  const Category& e = *p.source;
  for (int d = 0; d < e.num_objects(); ++d)
    for (int s : j.covering(p.obj(d))) {
      const ArrowSet& big = j.lattice().sieve(p.obj(d), s);
      bool found = false;
      for (int s2 : k.covering(d))
        if (image(p, k.lattice().sieve(d, s2)).subset_of(big)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
  return true;
}

IndexedCategory walk2_over_walk2(const CategoryPtr& w) {
  // fiber(b) = Walk2, fiber(a) = One
  auto one = terminal_category();
  auto fib = walking_arrow();
  std::vector<CategoryPtr> fibers(2);
  fibers[object(*w, "a")] = one;
  fibers[object(*w, "b")] = fib;
  std::vector<Functor> r(3);
  r[arrow(*w, "id_a")] = identity_functor(one);
  r[arrow(*w, "id_b")] = identity_functor(fib);
  r[arrow(*w, "u")] = to_terminal(fib);
  return validate_indexed(w, fibers, r);
}

Adjunction bang_pick_b(const CategoryPtr& w) {
  auto one = terminal_category();
  auto bang = to_terminal(w);
  auto pick_b = pick_object(w, object(*w, "b"));
  auto unit = validate_natural(identity_functor(w), compose(pick_b, bang), {arrow(*w, "u"), arrow(*w, "id_b")});
  return Adjunction{bang, pick_b, unit, identity_natural(identity_functor(one))};
}

Adjunction identity_adjunction(const CategoryPtr& c) {
  auto id = identity_functor(c);
  return Adjunction{id, id, identity_natural(id), identity_natural(id)};
}

Functor monotone(const CategoryPtr& s, const CategoryPtr& t, std::vector<int> om) {
  std::vector<int> am(s->num_arrows());
  for (int f = 0; f < s->num_arrows(); ++f) am[f] = t->hom(om[s->src(f)], om[s->tgt(f)])[0];
  return validate_functor(s, t, om, am);
}

Adjunction galois(const CategoryPtr& x, const CategoryPtr& y, std::vector<int> l, std::vector<int> r) {
  auto lf = monotone(x, y, l), rf = monotone(y, x, r);
  std::vector<int> eta, eps;
  for (int i = 0; i < x->num_objects(); ++i) eta.push_back(x->hom(i, r[l[i]])[0]);
  for (int j = 0; j < y->num_objects(); ++j) eps.push_back(y->hom(l[r[j]], j)[0]);
  return Adjunction{lf, rf, validate_natural(identity_functor(x), compose(rf, lf), eta),
                    validate_natural(compose(lf, rf), identity_functor(y), eps)};
}

CategoryPtr chain(int n) {
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) leq[i][j] = true;
  return poset_category(leq);
}

// Brute-force pullback search: the codomain fibration is a fibration exactly
// when every cospan has a pullback.
bool has_pullbacks(const Category& c) {
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.arrows_into(c.tgt(f))) {
      bool found = false;
      for (int p = 0; p < c.num_objects() && !found; ++p)
        for (int p1 : c.hom(p, c.src(f))) {
          for (int p2 : c.hom(p, c.src(g))) {
            if (c.compose(f, p1) != c.compose(g, p2)) continue;
            bool universal = true;
            for (int q = 0; q < c.num_objects() && universal; ++q)
              for (int q1 : c.hom(q, c.src(f)))
                for (int q2 : c.hom(q, c.src(g))) {
                  if (c.compose(f, q1) != c.compose(g, q2)) continue;
                  int n = 0;
                  for (int k : c.hom(q, p))
                    if (c.compose(p1, k) == q1 && c.compose(p2, k) == q2) ++n;
                  if (n != 1) universal = false;
                }
            if (universal) {
              found = true;
              break;
            }
          }
          if (found) break;
        }
      if (!found) return false;
    }
  return true;
}

}  // namespace

TEST_CASE("indexed categories are validated") {
  auto w = walking_arrow();
  CHECK_NOTHROW(two_point(w));
  auto ix = two_point(w);
  // restriction along u sending everything to y but declared on the wrong fiber
  std::swap(ix.restrictions[arrow(*w, "id_a")], ix.restrictions[arrow(*w, "id_b")]);
  CHECK_THROWS_AS(validate_indexed(ix.base, ix.fibers, ix.restrictions), CategoryError);
}

TEST_CASE("Grothendieck construction") {
  auto w = walking_arrow();
  SUBCASE("constant One fibers give the base back") {
    auto g = grothendieck(constant_indexed(w, terminal_category()));
    CHECK(g.total()->num_objects() == 2);
    CHECK(g.total()->num_arrows() == 3);
    CHECK(is_equivalence(g.projection()).holds);
  }
  SUBCASE("TwoPoint") {
    auto g = grothendieck(two_point(w));
    CHECK(g.total()->num_objects() == 3);
    CHECK(g.total()->num_arrows() == 5);
    CHECK(g.bundle.cartesian.size() == 5);
  }
  SUBCASE("non-iso vertical arrows are not cartesian") {
    auto g = grothendieck(walk2_over_walk2(w));
    int vertical = g.arrow_of(arrow(*g.indexed.fibers[1], "u"), arrow(*w, "id_b"), 1);
    CHECK_FALSE(is_cartesian_arrow(g.bundle, vertical));
    CHECK_FALSE(is_cartesian_arrow(g.bundle, vertical, CartesianMode::street));
    for (int a = 0; a < g.total()->num_arrows(); ++a) {
      CHECK(g.bundle.cartesian.contains(a) == is_cartesian_by_fiber_iso(g, a));
      if (g.total()->is_identity(a)) CHECK(g.bundle.cartesian.contains(a));
    }
    CHECK(is_fibration(g.projection()).holds);
  }
  SUBCASE("split-epi fibers over the split-epi base") {
    auto base = split_epi_category();
    auto fib = split_epi_category();
    auto g = grothendieck(constant_indexed(base, fib));
    for (int a = 0; a < g.total()->num_arrows(); ++a)
      CHECK(g.bundle.cartesian.contains(a) == is_cartesian_by_fiber_iso(g, a));
    CHECK(is_fibration(g.projection(), CartesianMode::street).holds);
  }
}

TEST_CASE("is_fibration") {
  auto w = walking_arrow();
  CHECK(is_fibration(codomain_fibration(w).projection).holds);
  for (const auto& c : {walking_arrow(), split_epi_category(), vee_site().category, chain(3)})
    CHECK(is_fibration(codomain_fibration(c).projection, CartesianMode::street).holds == has_pullbacks(*c));
  // Two objects over a and b with no arrow between them: u has no lift.
  auto d = discrete_category(2);
  auto p = validate_functor(d, w, {0, 1}, {arrow(*w, "id_a"), arrow(*w, "id_b")});
  auto check = is_fibration(p);
  CHECK_FALSE(check.holds);
  CHECK(check.base_arrow == arrow(*w, "u"));
}

TEST_CASE("morphisms of fibrations and fiber functors") {
  auto w = walking_arrow();
  auto g = grothendieck(two_point(w));
  auto id = identity_functor(g.total());
  CHECK(is_morphism_of_fibrations(id, identity_functor(w), g.bundle, g.bundle));
  CHECK(maps_identity(fiber_functor(id, identity_functor(w), g, g, object(*w, "b"))));

  // Collapse Walk2's fiber at b onto its object b: the cartesian arrow
  // (id, u) lands on (u, u) whose fiber part is not an iso.
  auto src = grothendieck(walk2_over_walk2(w));
  auto collapsed = constant_indexed(w, walking_arrow());
  auto tgt = grothendieck(collapsed);
  std::vector<int> om, am;
  const Category& fb = *tgt.indexed.fibers[0];
  for (auto [x, c] : src.object_pair) om.push_back(tgt.object_of(c == object(*w, "a") ? object(fb, "a") : x, c));
  for (int a = 0; a < src.total()->num_arrows(); ++a) {
    auto [u, f] = src.arrow_pair[a];
    auto [x2, c2] = src.object_pair[src.total()->tgt(a)];
    int tx = om[src.total()->src(a)], ty = om[src.total()->tgt(a)];
    // unique arrow between the images in the target total category
    auto hom = tgt.total()->hom(tx, ty);
    int pick = -1;
    for (int h : hom)
      if (tgt.arrow_pair[h].second == f) pick = h;
    am.push_back(pick);
    (void)u;
    (void)x2;
    (void)c2;
  }
  auto collapse = validate_functor(src.total(), tgt.total(), om, am);
  CHECK_FALSE(is_morphism_of_fibrations(collapse, identity_functor(w), src.bundle, tgt.bundle));
  auto ff = fiber_functor(collapse, identity_functor(w), src, tgt, object(*w, "a"));
  CHECK(ff.objects == std::vector<int>{object(fb, "a")});
}

TEST_CASE("Giraud topology") {
  auto sier = sierpinski_site();
  auto w = sier.category;
  SUBCASE("trivial base topology") {
    for (const auto& ix : {two_point(w), walk2_over_walk2(w), constant_indexed(w, split_epi_category())}) {
      auto g = grothendieck(ix);
      CHECK(giraud_topology(g, Topology::trivial(w)) == Topology::trivial(g.total()));
    }
  }
  SUBCASE("TwoPoint over Sier") {
    auto g = grothendieck(two_point(w));
    auto gir = giraud_topology(g, sier.topology);
    CHECK(is_topology(gir).holds);
    const int b = object(*w, "b"), u = arrow(*w, "u");
    for (int x = 0; x < 2; ++x) {
      int lift = g.arrow_of(0, u, x);
      CHECK(g.bundle.cartesian.contains(lift));
      CHECK(gir.covers(g.object_of(x, b), generate_sieve(g.total(), g.object_of(x, b), {lift}).arrows));
    }
    CHECK(comorphism_oracle(g.projection(), gir, sier.topology));
  }
  SUBCASE("constant One fibers transport J") {
    auto g = grothendieck(constant_indexed(w, terminal_category()));
    auto gir = giraud_topology(g, sier.topology);
    const auto& lat = g.total()->lattice();
    for (int o = 0; o < g.total()->num_objects(); ++o)
      for (int i = 0; i < lat.count(o); ++i)
        CHECK(gir.covers(o, i) ==
              sier.topology.covers(g.projection().obj(o), image(g.projection(), lat.sieve(o, i))));
  }
  SUBCASE("minimality against every topology upstairs") {
    for (const auto& ix : {two_point(w), walk2_over_walk2(w)}) {
      auto g = grothendieck(ix);
      auto gir = giraud_topology(g, sier.topology);
      auto all = enumerate_topologies(g.total(), 1U << 20);
      REQUIRE_FALSE(all.truncated);
      for (const auto& k : all.topologies)
        CHECK(comorphism_oracle(g.projection(), k, sier.topology) == topology_leq(gir, k));
    }
  }
}

TEST_CASE("direct image") {
  auto w = walking_arrow();
  auto g = grothendieck(two_point(w));
  SUBCASE("along the identity") {
    auto di = direct_image(g, identity_functor(w));
    CHECK(di.pulled.indexed == g.indexed);
    CHECK(maps_identity(di.q));
    CHECK(q_reflects_cartesian(di, g));
  }
  SUBCASE("along pick_b") {
    auto pick_b = pick_object(w, object(*w, "b"));
    auto di = direct_image(g, pick_b);
    CHECK(di.pulled.total()->num_objects() == 2);
    CHECK(di.pulled.total()->num_arrows() == 2);
    CHECK(q_reflects_cartesian(di, g));
    CHECK(is_morphism_of_fibrations(di.q, pick_b, di.pulled.bundle, g.bundle));
    auto ff = fiber_functor(di.q, pick_b, di.pulled, g, 0);
    CHECK(is_equivalence(ff).holds);
  }
  SUBCASE("along a constant functor") {
    auto bang = to_terminal(w);
    auto over_one = grothendieck(constant_indexed(terminal_category(), split_epi_category()));
    auto di = direct_image(over_one, bang);
    for (int c = 0; c < 2; ++c) CHECK(di.pulled.indexed.fibers[c] == over_one.indexed.fibers[0]);
    CHECK(q_reflects_cartesian(di, over_one));
  }
}

TEST_CASE("inverse image along an adjunction") {
  auto w = walking_arrow();
  SUBCASE("identity adjunction") {
    auto g = grothendieck(two_point(w));
    auto inv = inverse_image_adjoint(g, identity_adjunction(w));
    CHECK(maps_identity(inv.left));
    CHECK(maps_identity(inv.right));
  }
  SUBCASE("! adjoint to pick_b") {
    auto a = split_epi_category();
    auto g = grothendieck(constant_indexed(terminal_category(), a));
    auto inv = inverse_image_adjoint(g, bang_pick_b(w));
    CHECK(inv.pulled.indexed == constant_indexed(w, a));
    auto sf = structure_functor(g, bang_pick_b(w));
    CHECK(sf.composite == inv.right);
  }
  SUBCASE("representables go to representables") {
    auto x = chain(3), y = chain(2);
    auto adj = galois(x, y, {0, 1, 1}, {0, 2});
    // Cix = y(c) over Y; inverse image along L ⊣ R is y(R c) over X.
    for (int c = 0; c < 2; ++c) {
      auto g = grothendieck(representable_indexed(y, c));
      auto inv = inverse_image_adjoint(g, adj);
      auto rep = grothendieck(representable_indexed(x, adj.right.obj(c)));
      CHECK(inv.pulled.total()->num_objects() == rep.total()->num_objects());
      CHECK(is_equivalence(slice_category(x, adj.right.obj(c)).projection).holds ==
            is_equivalence(rep.projection()).holds);
    }
  }
  SUBCASE("mismatched data is rejected") {
    auto g = grothendieck(two_point(w));
    auto bad = bang_pick_b(w);
    CHECK_THROWS_AS(inverse_image_adjoint(g, bad), CategoryError);
  }
}

TEST_CASE("structure functor is the right comparison") {
  auto x = chain(3), y = chain(2);
  auto adj = galois(x, y, {0, 1, 1}, {0, 2});
  auto fib = grothendieck(constant_indexed(y, split_epi_category()));
  auto sf = structure_functor(fib, adj);
  CHECK(sf.composite == sf.inverse.right);
  auto ident = structure_functor(fib, identity_adjunction(y));
  CHECK(maps_identity(ident.composite));
}

TEST_CASE("composing base changes") {
  auto w = walking_arrow();
  auto one = terminal_category();
  auto over_one = grothendieck(constant_indexed(one, split_epi_category()));
  auto r = compose_direct_images(over_one, to_terminal(w), identity_functor(one));
  CHECK(r.found);
  auto g = grothendieck(two_point(w));
  CHECK(compose_direct_images(g, identity_functor(w), identity_functor(w)).found);

  auto x = chain(3), y = chain(2), z = chain(2);
  // L2 ⊣ R2 : X <-> Y, L1 ⊣ R1 : Y <-> Z, Cix over Z
  auto inner = galois(x, y, {0, 1, 1}, {0, 2});
  auto outer = galois(y, z, {0, 1}, {0, 1});
  auto cix = grothendieck(constant_indexed(z, split_epi_category()));
  auto inv = compose_inverse_images(cix, outer, inner);
  CHECK(inv.found);
  CHECK(inv.isos.size() == 2);

  auto f = monotone(x, y, {0, 1, 1});
  auto f2 = monotone(y, z, {0, 1});
  for (int c = 0; c < 3; ++c) CHECK(compose_slices(f, f2, c).found);
}

TEST_CASE("cartesian fibrations") {
  auto w = walking_arrow();
  CHECK(is_cartesian_fibration(constant_indexed(w, terminal_category())));
  CHECK_FALSE(is_cartesian_fibration(two_point(w)));
}
