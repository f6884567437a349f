#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "relsite/samples.hpp"
#include "relsite/sheaf.hpp"

using namespace relsite;

namespace {

int object(const Category& c, const char* name) { return *c.find_object(name); }

Presheaf two_over_one(const CategoryPtr& w) {
  // P(b) = {0, 1}, P(a) = {*}
  std::vector<int> sizes(2);
  sizes[object(*w, "a")] = 1;
  sizes[object(*w, "b")] = 2;
  std::vector<std::vector<int>> actions(3);
  actions[*w->find_arrow("id_a")] = {0};
  actions[*w->find_arrow("id_b")] = {0, 1};
  actions[*w->find_arrow("u")] = {0, 0};
  return validate_presheaf(w, sizes, actions);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Plus construction from its definition: pairs (cover, matching family),
// identified when they agree on a common covering refinement.
std::vector<int> plus_class_counts(const Presheaf& p, const Topology& j) {
  const Category& c = *p.base;
  const auto& lat = j.lattice();
  std::vector<int> counts;
  for (int o = 0; o < c.num_objects(); ++o) {
    struct Pair {
      ArrowSet sieve;
      std::vector<int> arrows, values;
    };
    std::vector<Pair> pairs;
    for (int idx : j.covering(o)) {
      const ArrowSet& s = lat.sieve(o, idx);
      for (auto& fam : matching_families(p, s)) pairs.push_back({s, s.elements(), fam});
    }
    auto value_at = [](const Pair& pr, int arrow) {
      for (std::size_t i = 0; i < pr.arrows.size(); ++i)
        if (pr.arrows[i] == arrow) return pr.values[i];
      return -1;
    };
    UnionFind uf(static_cast<int>(pairs.size()));
    for (std::size_t a = 0; a < pairs.size(); ++a)
      for (std::size_t b = a + 1; b < pairs.size(); ++b)
        for (int idx : j.covering(o)) {
          const ArrowSet& r = lat.sieve(o, idx);
          if (!r.subset_of(pairs[a].sieve & pairs[b].sieve)) continue;
          bool agree = true;
          r.for_each([&](int f) { agree = agree && value_at(pairs[a], f) == value_at(pairs[b], f); });
          if (agree) {
            uf.unite(static_cast<int>(a), static_cast<int>(b));
            break;
          }
        }
    int classes = 0;
    for (int i = 0; i < static_cast<int>(pairs.size()); ++i)
      if (uf.find(i) == i) ++classes;
    counts.push_back(classes);
  }
  return counts;
}

std::vector<Site> sites() {
  std::vector<Site> out{sierpinski_site(), vee_site(), split_epi_site()};
  auto w = walking_arrow();
  out.push_back({w, Topology::trivial(w)});
  Coverage empty(w);
  empty.add(object(*w, "b"), {});
  out.push_back({w, saturate(empty)});
  return out;
}

}  // namespace

TEST_CASE("presheaves are validated") {
  auto w = walking_arrow();
  CHECK_NOTHROW(two_over_one(w));
  CHECK_THROWS_AS(validate_presheaf(w, {1, 2}, {{0}, {0, 1}, {0}}), CategoryError);
  auto rep = representable_presheaf(w, object(*w, "b"));
  CHECK(rep.sizes == std::vector<int>{1, 1});
}

TEST_CASE("is_sheaf") {
  auto sier = sierpinski_site();
  auto w = sier.category;
  auto p = two_over_one(w);
  CHECK(is_sheaf(p, Topology::trivial(w)).holds);
  auto check = is_sheaf(p, sier.topology);
  CHECK_FALSE(check.holds);
  CHECK(check.amalgamations == 2);
  CHECK(check.object == object(*w, "b"));
  // y(b) = {id_b} at b, {u} at a: the single family on <u> has one amalgamation.
  CHECK(is_sheaf(representable_presheaf(w, object(*w, "b")), sier.topology).holds);
  // y(a) is empty at b but the family on <u> needs a value at a: no amalgamation.
  CHECK_FALSE(is_sheaf(representable_presheaf(w, object(*w, "a")), sier.topology).holds);
}

TEST_CASE("plus construction") {
  auto sier = sierpinski_site();
  auto w = sier.category;
  auto p = two_over_one(w);
  auto pp = plus(p, sier.topology);
  CHECK(pp.presheaf.sizes == std::vector<int>{1, 1});
  auto triv = plus(p, Topology::trivial(w));
  CHECK(is_iso(p, triv.presheaf, triv.unit));
  CHECK(is_natural(p, pp.presheaf, pp.unit));
}

TEST_CASE("plus agrees with the colimit over covers") {
  for (const auto& site : sites()) {
    int n = 0;
    for_each_presheaf(site.category, 2, [&](const Presheaf& p) {
      auto pp = plus(p, site.topology);
      CHECK(pp.presheaf.sizes == plus_class_counts(p, site.topology));
      return ++n < 150;
    });
  }
}

TEST_CASE("sheafification") {
  auto sier = sierpinski_site();
  auto w = sier.category;
  auto s = sheafify(two_over_one(w), sier.topology);
  CHECK(s.sheaf.sizes == std::vector<int>{1, 1});
  CHECK(is_sheaf(s.sheaf, sier.topology).holds);
  CHECK(check_universal_property(two_over_one(w), sier.topology, s).holds);

  auto yb = representable_presheaf(w, object(*w, "b"));
  auto lb = sheafify(yb, sier.topology);
  CHECK(is_iso(yb, lb.sheaf, lb.unit));

  for (const auto& site : sites()) {
    int n = 0;
    for_each_presheaf(site.category, 2, [&](const Presheaf& p) {
      auto sh = sheafify(p, site.topology);
      CHECK(is_sheaf(sh.sheaf, site.topology).holds);
      CHECK(is_natural(p, sh.sheaf, sh.unit));
      auto again = sheafify(sh.sheaf, site.topology);
      CHECK(is_iso(sh.sheaf, again.sheaf, again.unit));
      if (is_sheaf(p, site.topology).holds) CHECK(is_iso(p, sh.sheaf, sh.unit));
      return ++n < 40;
    });
  }
}

TEST_CASE("universal property on the sample sites") {
  for (const auto& site : sites()) {
    int n = 0;
    for_each_presheaf(site.category, 2, [&](const Presheaf& p) {
      auto sh = sheafify(p, site.topology);
      auto u = check_universal_property(p, site.topology, sh, 2);
      CHECK_MESSAGE(u.holds, u.message);
      return ++n < 8;
    });
  }
}

TEST_CASE("presheaf enumeration counts") {
  // Presheaves on Walk2 with sizes <= 2: sum over (|P a|, |P b|) of |P a|^|P b|.
  int expected = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      int n = 1;
      for (int i = 0; i < b; ++i) n *= a;
      expected += n;
    }
  int count = 0;
  for_each_presheaf(walking_arrow(), 2, [&](const Presheaf&) { return ++count, true; });
  CHECK(count == expected);
}

namespace {

// Least relabeled action table over every permutation of every value set.
std::vector<std::vector<int>> canonical_key(const Presheaf& p) {
  const Category& c = *p.base;
  const int n = c.num_objects();
  std::vector<std::vector<int>> perm(n);
  for (int o = 0; o < n; ++o) {
    perm[o].resize(p.sizes[o]);
    std::iota(perm[o].begin(), perm[o].end(), 0);
  }
  std::vector<std::vector<int>> best;
  auto visit = [&](auto&& self, int o) -> void {
    if (o == n) {
      std::vector<std::vector<int>> t(c.num_arrows());
      for (int f = 0; f < c.num_arrows(); ++f) {
        t[f].resize(p.sizes[c.tgt(f)]);
        for (int x = 0; x < p.sizes[c.tgt(f)]; ++x) t[f][perm[c.tgt(f)][x]] = perm[c.src(f)][p.act(f, x)];
      }
      if (best.empty() || t < best) best = t;
      return;
    }
    std::sort(perm[o].begin(), perm[o].end());
    do self(self, o + 1);
    while (std::next_permutation(perm[o].begin(), perm[o].end()));
  };
  visit(visit, 0);
  return best;
}

}  // namespace

TEST_CASE("presheaves up to isomorphism") {
  for (const auto& base : {walking_arrow(), split_epi_category(), vee_site().category, discrete_category(2)}) {
    std::set<std::vector<std::vector<int>>> orbits;
    for_each_presheaf(base, 3, [&](const Presheaf& p) { return orbits.insert(canonical_key(p)), true; });
    std::set<std::vector<std::vector<int>>> seen;
    int classes = 0;
    for_each_presheaf(base, PresheafSearch{3, 0, true}, [&](const Presheaf& p) {
      ++classes;
      CHECK(seen.insert(canonical_key(p)).second);
      return true;
    });
    CHECK(classes == static_cast<int>(orbits.size()));
  }
  CHECK_THROWS_AS(for_each_presheaf(vee_site().category, PresheafSearch{3, 50, false}, [](const Presheaf&) { return true; }),
                  CapError);
}

TEST_CASE("precompose") {
  auto w = walking_arrow();
  auto p = two_over_one(w);
  CHECK(precompose(p, identity_functor(w)) == p);
  auto at_b = precompose(p, pick_object(w, object(*w, "b")));
  CHECK(at_b.sizes == std::vector<int>{2});
  auto bang = to_terminal(w);
  auto q = terminal_presheaf(terminal_category());
  CHECK(precompose(q, bang) == terminal_presheaf(w));
}

TEST_CASE("pullback presheaf") {
  auto w = walking_arrow();
  auto g = grothendieck(two_point(w));
  const Category& t = *g.total();
  const int b = object(*w, "b"), a = object(*w, "a");
  for (int d = 0; d < t.num_objects(); ++d) {
    const int pd = g.projection().obj(d);
    auto pb = prop33_pullback_presheaf(g.projection(), d, w->identity(pd), w->identity(pd));
    for (int e = 0; e < t.num_objects(); ++e) CHECK(pb.presheaf.size(e) == static_cast<int>(t.hom(e, d).size()));
  }
  // f' = u, u' = id_b at (x0, b): pairs (g, w) with u∘w = p(g)
  const int u = *w->find_arrow("u");
  const int d = g.object_of(0, b);
  auto pb = prop33_pullback_presheaf(g.projection(), d, w->identity(b), u);
  for (int e = 0; e < t.num_objects(); ++e) {
    int brute = 0;
    for (int gg : t.hom(e, d))
      for (int ww : w->hom(g.projection().obj(e), a))
        if (w->compose(u, ww) == g.projection().arr(gg)) ++brute;
    CHECK(pb.presheaf.size(e) == brute);
  }
}
