#include <functional>

#include "doctest.h"
#include "relsite/samples.hpp"
#include "relsite/site_verify.hpp"

using namespace relsite;

namespace {

int arrow(const Category& c, const char* name) { return *c.find_arrow(name); }
int object(const Category& c, const char* name) { return *c.find_object(name); }

// Every functor c -> d, by trying all object maps and all arrow choices.
std::vector<Functor> all_functors(const CategoryPtr& c, const CategoryPtr& d) {
  std::vector<Functor> out;
  std::vector<int> objs(c->num_objects(), 0);
  std::function<void(int)> objects = [&](int i) {
    if (i == c->num_objects()) {
      std::vector<int> arrs(c->num_arrows(), -1);
      std::function<void(int)> arrows = [&](int a) {
        if (a == c->num_arrows()) {
          try {
            out.push_back(validate_functor(c, d, objs, arrs));
          } catch (const CategoryError&) {
          }
          return;
        }
        for (int g : d->hom(objs[c->src(a)], objs[c->tgt(a)])) {
          arrs[a] = g;
          arrows(a + 1);
        }
      };
      arrows(0);
      return;
    }
    for (int o = 0; o < d->num_objects(); ++o) {
      objs[i] = o;
      objects(i + 1);
    }
  };
  objects(0);
  return out;
}

// Continuity from the definition: explicit comma categories (d ↓ Aπ_S) and
// their components, checked for every pair with a common composite.
bool continuity_oracle(const SiteFunctor& s) {
  const Functor& a = s.functor;
  const auto& lat = s.source.lattice();
  const CategoryPtr& dc = a.target;
  for (int c = 0; c < a.source->num_objects(); ++c)
    for (int idx : s.source.covering(c)) {
      if (!s.target.covers(a.obj(c), generate(*dc, image(a, lat.sieve(c, idx))))) return false;
      auto el = elements_of_arrows(a.source, c, lat.sieve(c, idx));
      Functor api = compose(a, el.projection);
      std::vector<std::vector<int>> label(dc->num_objects());
      std::vector<std::map<std::pair<int, int>, int>> where(dc->num_objects());
      for (int e = 0; e < dc->num_objects(); ++e) {
        auto comma = comma_category(pick_object(dc, e), api);
        label[e] = connected_components(*comma.category);
        for (int i = 0; i < static_cast<int>(comma.triples.size()); ++i) {
          auto [unit, obj, y] = comma.triples[i];
          where[e][{y, el.arrow_of_object[obj]}] = i;
        }
      }
      auto comp = [&](int e, int y, int f) { return label[e][where[e].at({y, f})]; };
      for (int d = 0; d < dc->num_objects(); ++d)
        for (const auto& [k1, i1] : where[d])
          for (const auto& [k2, i2] : where[d]) {
            auto [y1, f1] = k1;
            auto [y2, f2] = k2;
            if (dc->compose(a.arr(f1), y1) != dc->compose(a.arr(f2), y2)) continue;
            ArrowSet r;
            for (int k : dc->arrows_into(d))
              if (comp(dc->src(k), dc->compose(y1, k), f1) == comp(dc->src(k), dc->compose(y2, k), f2)) r.insert(k);
            if (!s.target.covers(d, r)) return false;
          }
    }
  return true;
}

// For the trivial target topology covering-flatness is cofilteredness of
// every (d ↓ F).
bool cofiltered_comma(const Functor& f) {
  const CategoryPtr& dc = f.target;
  for (int d = 0; d < dc->num_objects(); ++d) {
    auto comma = comma_category(pick_object(dc, d), f);
    const Category& k = *comma.category;
    if (k.num_objects() == 0) return false;
    for (int x = 0; x < k.num_objects(); ++x)
      for (int y = 0; y < k.num_objects(); ++y) {
        bool span = false;
        for (int z = 0; z < k.num_objects() && !span; ++z) span = !k.hom(z, x).empty() && !k.hom(z, y).empty();
        if (!span) return false;
      }
    for (int g1 = 0; g1 < k.num_arrows(); ++g1)
      for (int g2 : k.hom(k.src(g1), k.tgt(g1))) {
        bool eq = false;
        for (int h : k.arrows_into(k.src(g1))) eq = eq || k.compose(g1, h) == k.compose(g2, h);
        if (!eq) return false;
      }
  }
  return true;
}

void check_replay(const SiteFunctor& s, const Verdict& v) {
  for (const auto& w : v.trace) CHECK(evaluate(s, w));
  if (!v.holds) {
    REQUIRE(v.witness);
    CHECK_FALSE(evaluate(s, *v.witness));
  }
}

}  // namespace

TEST_CASE("identity functors pass every decider") {
  for (const auto& site : {sierpinski_site(), vee_site(), split_epi_site()}) {
    SiteFunctor s{identity_functor(site.category), site.topology, site.topology};
    CHECK(is_comorphism(s).holds);
    CHECK(is_cover_preserving(s).holds);
    CHECK(is_continuous(s).holds);
    CHECK(is_covering_flat(s).holds);
    CHECK(is_morphism_of_sites(s).holds);
    CHECK(is_dense_morphism(s).holds);
  }
}

TEST_CASE("Giraud projection") {
  auto sier = sierpinski_site();
  auto g = grothendieck(two_point(sier.category));
  SiteFunctor s{g.projection(), giraud_topology(g, sier.topology), sier.topology};
  auto v = is_comorphism(s);
  CHECK(v.holds);
  CHECK_FALSE(v.trace.empty());
  check_replay(s, v);
  CHECK(is_continuous(s).holds);
}

TEST_CASE("cover preservation") {
  auto sier = sierpinski_site();
  auto one = terminal_category();
  SiteFunctor bang{to_terminal(sier.category), sier.topology, Topology::trivial(one)};
  CHECK(is_cover_preserving(bang).holds);

  const int a = object(*sier.category, "a");
  SiteFunctor pick{pick_object(sier.category, a), Topology::degenerate(one), sier.topology};
  auto v = is_cover_preserving(pick);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(v.witness->condition == "cover-preserving");
  CHECK(v.witness->sieve.empty());
  check_replay(pick, v);
  CHECK(describe(v, &pick).find("witness cover-preserving at") != std::string::npos);
}

TEST_CASE("covering-flatness of a point") {
  auto sier = sierpinski_site();
  auto w = sier.category;
  auto one = terminal_category();
  Functor pick = pick_object(w, object(*w, "a"));
  CHECK(is_covering_flat({pick, Topology::trivial(one), sier.topology}).holds);
  auto v = is_covering_flat({pick, Topology::trivial(one), Topology::trivial(w)});
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(v.witness->condition == "flat-cone");
  CHECK(v.witness->object == object(*w, "b"));
  CHECK(is_morphism_of_sites({pick, Topology::trivial(one), sier.topology}).holds);
}

TEST_CASE("dense subcategories") {
  auto vee = vee_site();
  auto c = vee.category;
  const int a = object(*c, "a"), b = object(*c, "b");
  auto sides = full_subcategory(c, {a, b});
  SiteFunctor s{sides.inclusion, Topology::trivial(sides.category), vee.topology};
  CHECK(is_dense_morphism(s).holds);

  auto sier = sierpinski_site();
  auto only_b = full_subcategory(sier.category, {object(*sier.category, "b")});
  SiteFunctor t{only_b.inclusion, Topology::trivial(only_b.category), Topology::trivial(sier.category)};
  CHECK(is_morphism_of_sites(t).holds);
  auto v = is_dense_morphism(t);
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(v.witness->condition == "image-cover");
  check_replay(t, v);
}

TEST_CASE("deciders against oracles on all functors between small sites") {
  std::vector<CategoryPtr> cats = {terminal_category(), walking_arrow(), vee_site().category, split_epi_category()};
  int checked = 0;
  for (const auto& src : cats)
    for (const auto& tgt : cats) {
      auto src_tops = enumerate_topologies(src, 64).topologies;
      auto tgt_tops = enumerate_topologies(tgt, 64).topologies;
      for (const auto& f : all_functors(src, tgt))
        for (const auto& j : src_tops)
          for (const auto& k : tgt_tops) {
            SiteFunctor s{f, j, k};
            auto cont = is_continuous(s);
            CHECK(cont.holds == continuity_oracle(s));
            check_replay(s, cont);
            auto flat = is_covering_flat(s);
            check_replay(s, flat);
            if (k == Topology::trivial(tgt)) CHECK(flat.holds == cofiltered_comma(f));
            check_replay(s, is_comorphism(s));
            check_replay(s, is_dense_morphism(s));
            ++checked;
          }
    }
  CHECK(checked > 100);
}

TEST_CASE("lifting square conditions") {
  auto sier = sierpinski_site();
  auto w = sier.category;
  Functor id = identity_functor(w);
  LiftingSquare sq{id, id, id, id, identity_natural(id), sier.topology};
  auto v = check_prop33_conditions(sq);
  CHECK(v.holds);
  for (const auto& wit : v.trace) CHECK(evaluate(sq, wit));

  // fiber(a) = Walk2 {x0 -> x1}, fiber(b) = One restricting to x1; the
  // constant One fibration maps in with u sent to the non-cartesian (v, u).
  auto one = terminal_category();
  auto fib = walking_arrow();
  std::vector<CategoryPtr> fibers{fib, one};
  std::vector<Functor> r(3);
  r[arrow(*w, "id_a")] = identity_functor(fib);
  r[arrow(*w, "id_b")] = identity_functor(one);
  r[arrow(*w, "u")] = pick_object(fib, object(*fib, "b"));
  auto g = grothendieck(validate_indexed(w, fibers, r));
  auto g1 = grothendieck(constant_indexed(w, one));
  const int u = arrow(*w, "u"), fu = arrow(*fib, "u");
  for (bool cartesian : {true, false}) {
    std::vector<int> objs(2), arrs(3);
    objs[g1.object_of(0, 0)] = g.object_of(cartesian ? 1 : 0, 0);
    objs[g1.object_of(0, 1)] = g.object_of(0, 1);
    for (int f = 0; f < 3; ++f)
      arrs[g1.arrow_of(0, f, 0)] = f == u ? g.arrow_of(cartesian ? fib->identity(1) : fu, u, 0)
                                          : g.total()->identity(objs[g1.object_of(0, w->src(f))]);
    auto a = validate_functor(g1.total(), g.total(), objs, arrs);
    LiftingSquare fsq{a, identity_functor(w), g.projection(), g1.projection(),
                      identity_natural(compose(g.projection(), a)), giraud_topology(g, sier.topology)};
    auto fv = check_prop33_conditions(fsq);
    CHECK(fv.holds == cartesian);
    if (!fv.holds) {
      REQUIRE(fv.witness);
      CHECK_FALSE(evaluate(fsq, *fv.witness));
    }
  }

  LiftingSquare bad = sq;
  bad.phi = identity_natural(identity_functor(split_epi_category()));
  CHECK_THROWS_AS(check_prop33_conditions(bad), CategoryError);
}
