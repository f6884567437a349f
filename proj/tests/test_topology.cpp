#include "doctest.h"
#include "relsite/topology.hpp"

using namespace relsite;

namespace {

int arrow(const Category& c, const char* name) { return *c.find_arrow(name); }

ArrowSet set_of(std::initializer_list<int> arrows) {
  ArrowSet s;
  for (int a : arrows) s.insert(a);
  return s;
}

// Brute-force check of the three axioms plus upward closure, straight from
// the definitions and without the sieve lattice tables.
bool axioms_hold(const Topology& t) {
  const Category& c = *t.base();
  const auto& lat = t.lattice();
  for (int o = 0; o < c.num_objects(); ++o) {
    if (!t.covers(o, lat.maximal(o))) return false;
    for (const auto& s : lat.sieves(o)) {
      if (t.covers(o, s)) {
        for (int f : c.arrows_into(o))
          if (!t.covers(c.src(f), pullback(c, f, s))) return false;
        for (const auto& bigger : lat.sieves(o))
          if (s.subset_of(bigger) && !t.covers(o, bigger)) return false;
      }
      for (const auto& r : lat.sieves(o)) {
        if (!t.covers(o, r)) continue;
        bool local = true;
        r.for_each([&](int f) { local = local && t.covers(c.src(f), pullback(c, f, s)); });
        if (local && !t.covers(o, s)) return false;
      }
    }
  }
  return true;
}

Topology sier() {
  auto w = walking_arrow();
  Coverage cov(w);
  cov.add(*w->find_object("b"), {arrow(*w, "u")});
  return saturate(cov);
}

}  // namespace

TEST_CASE("generate and pull back sieves") {
  auto w = walking_arrow();
  int b = *w->find_object("b"), a = *w->find_object("a");
  int u = arrow(*w, "u");
  CHECK(generate_sieve(w, b, {arrow(*w, "id_b")}) == maximal_sieve(w, b));
  CHECK(generate_sieve(w, b, {u}).arrows == set_of({u}));
  CHECK(generate_sieve(w, b, {}).arrows.empty());
  CHECK_THROWS_AS(generate_sieve(w, b, {arrow(*w, "id_a")}), CategoryError);
  auto gen_u = generate_sieve(w, b, {u});
  CHECK(pullback_sieve(arrow(*w, "id_b"), gen_u) == gen_u);
  CHECK(pullback_sieve(u, gen_u) == maximal_sieve(w, a));
  CHECK(pullback_sieve(u, maximal_sieve(w, b)) == maximal_sieve(w, a));
}

TEST_CASE("sieve lattice of Walk2") {
  auto w = walking_arrow();
  const auto& lat = w->lattice();
  CHECK(lat.count(*w->find_object("b")) == 3);
  CHECK(lat.count(*w->find_object("a")) == 2);
  CHECK(lat.total() == 5);
}

TEST_CASE("saturate") {
  auto w = walking_arrow();
  int a = *w->find_object("a"), b = *w->find_object("b");
  SUBCASE("empty coverage gives the trivial topology") {
    CHECK(saturate(Coverage(w)) == Topology::trivial(w));
  }
  SUBCASE("Sierpinski coverage") {
    auto t = sier();
    CHECK(t.covering(b).size() == 2);
    CHECK(t.covers(b, set_of({arrow(*w, "u")})));
    CHECK(t.covering(a).size() == 1);
    CHECK(is_topology(t).holds);
    CHECK(axioms_hold(t));
  }
  SUBCASE("empty family forces every sieve to cover") {
    Coverage cov(w);
    cov.add(b, {});
    auto t = saturate(cov);
    CHECK(t.covering(b).size() == 3);
    // stability: the empty sieve on a is the pullback of the empty sieve on b
    CHECK(t.covering(a).size() == 2);
    CHECK(axioms_hold(t));
  }
}

TEST_CASE("is_topology reports the failing axiom") {
  auto w = walking_arrow();
  int b = *w->find_object("b");
  auto t = Topology::trivial(w);
  CHECK(is_topology(t).holds);
  Topology partial(w);
  partial.set(b, w->lattice().index_of(b, set_of({arrow(*w, "u")})));
  auto check = is_topology(partial);
  CHECK_FALSE(check.holds);
  CHECK(check.message == "maximality at a");
  CHECK(replay_failure(partial, check));

  // Only maximal sieves and <u> on b, with the empty sieve on a covering but
  // nothing on b pulling back to it: stability holds, transitivity fails.
  Topology t2 = sier();
  t2.set(*w->find_object("a"), w->lattice().empty(*w->find_object("a")));
  auto c2 = is_topology(t2);
  CHECK_FALSE(c2.holds);
  CHECK(c2.axiom == "transitivity");
  CHECK(replay_failure(t2, c2));
}

TEST_CASE("enumerate topologies") {
  auto one = terminal_category();
  auto all = enumerate_topologies(one, 100);
  CHECK(all.topologies.size() == 2);
  CHECK_FALSE(all.truncated);
  auto w = walking_arrow();
  auto ws = enumerate_topologies(w, 1000);
  bool has_trivial = false, has_sier = false;
  for (const auto& t : ws.topologies) {
    CHECK(axioms_hold(t));
    has_trivial = has_trivial || t == Topology::trivial(w);
    has_sier = has_sier || t == sier();
  }
  CHECK(has_trivial);
  CHECK(has_sier);
  auto capped = enumerate_topologies(w, 1);
  CHECK(capped.topologies.size() == 1);
  CHECK(capped.truncated);
}

TEST_CASE("enumeration agrees with a brute-force filter over all covers-maps") {
  for (const auto& c : {walking_arrow(), split_epi_category(),
                        poset_category({{1, 1, 1}, {0, 1, 0}, {0, 0, 1}})}) {
    const auto& lat = c->lattice();
    std::vector<std::pair<int, int>> slots;
    for (int o = 0; o < c->num_objects(); ++o)
      for (int i = 0; i < lat.count(o); ++i) slots.emplace_back(o, i);
    REQUIRE(slots.size() < 20);
    std::size_t brute = 0;
    for (std::uint32_t mask = 0; mask < (1U << slots.size()); ++mask) {
      Topology t(c);
      for (std::size_t k = 0; k < slots.size(); ++k)
        if (mask >> k & 1U) t.set(slots[k].first, slots[k].second);
      if (axioms_hold(t)) ++brute;
    }
    auto e = enumerate_topologies(c, 1U << 20);
    CHECK(e.topologies.size() == brute);
    for (std::size_t i = 0; i < e.topologies.size(); ++i)
      for (std::size_t j = 0; j < e.topologies.size(); ++j) {
        bool le = topology_leq(e.topologies[i], e.topologies[j]);
        bool ge = topology_leq(e.topologies[j], e.topologies[i]);
        CHECK((le && ge) == (i == j));
      }
  }
}

TEST_CASE("saturate is idempotent, monotone and least") {
  auto c = split_epi_category();
  auto all = enumerate_topologies(c, 1U << 20).topologies;
  const auto& lat = c->lattice();
  for (int o = 0; o < c->num_objects(); ++o)
    for (int i = 0; i < lat.count(o); ++i) {
      Coverage cov(c);
      cov.add(o, lat.sieve(o, i).elements());
      auto t = saturate(cov);
      CHECK(saturate(t) == t);
      for (const auto& k : all)
        if (k.covers(o, i)) CHECK(topology_leq(t, k));
    }
}

TEST_CASE("topology_leq") {
  auto w = walking_arrow();
  CHECK(topology_leq(Topology::trivial(w), sier()));
  CHECK_FALSE(topology_leq(sier(), Topology::trivial(w)));
  CHECK_THROWS_AS(topology_leq(Topology::trivial(w), Topology::trivial(terminal_category())), CategoryError);
}

TEST_CASE("induced image topology") {
  auto w = walking_arrow();
  auto s = sier();
  CHECK(induced_image_topology(identity_functor(w), s) == s);
  auto one = terminal_category();
  auto cand = image_candidate(to_terminal(w), Topology::trivial(one));
  for (int o = 0; o < 2; ++o)
    for (int i = 0; i < w->lattice().count(o); ++i)
      CHECK(cand.covers(o, i) == !w->lattice().sieve(o, i).empty());
  CHECK(is_topology(cand).holds == axioms_hold(cand));
}
