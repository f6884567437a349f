#include <set>

#include "doctest.h"
#include "relsite/kernel.hpp"
#include "relsite/sieve.hpp"

using namespace relsite;

namespace {

int arrow(const Category& c, const char* name) { return *c.find_arrow(name); }
int object(const Category& c, const char* name) { return *c.find_object(name); }

// Undirected reachability by DFS, independent of the union-find in the kernel.
std::vector<int> reachability_labels(const Category& c) {
  std::vector<int> label(c.num_objects(), -1);
  int next = 0;
  for (int s = 0; s < c.num_objects(); ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> stack{s};
    label[s] = next;
    while (!stack.empty()) {
      int o = stack.back();
      stack.pop_back();
      for (int a = 0; a < c.num_arrows(); ++a) {
        int other = -1;
        if (c.src(a) == o) other = c.tgt(a);
        if (c.tgt(a) == o) other = c.src(a);
        if (other >= 0 && label[other] < 0) {
          label[other] = next;
          stack.push_back(other);
        }
      }
    }
    ++next;
  }
  return label;
}

}  // namespace

TEST_CASE("validate_category accepts the small named categories") {
  CHECK(terminal_category()->num_arrows() == 1);
  auto w = walking_arrow();
  CHECK(w->num_objects() == 2);
  CHECK(w->num_arrows() == 3);
  CHECK(w->compose(arrow(*w, "u"), arrow(*w, "id_a")) == arrow(*w, "u"));
  auto se = split_epi_category();
  CHECK(se->num_arrows() == 5);
}

TEST_CASE("validate_category rejects composites of non-composable pairs") {
  CategoryTables t;
  t.objects = {"a", "b"};
  t.arrows = {{"u", "a", "b"}};
  t.compositions = {{"u", "u", "u"}};
  CHECK_THROWS_WITH_AS(validate_category(t), doctest::Contains("non-composable pair"), CategoryError);
}

TEST_CASE("validate_category rejects a missing composite") {
  CategoryTables t;
  t.objects = {"a", "b", "c"};
  t.arrows = {{"f", "a", "b"}, {"g", "b", "c"}};
  CHECK_THROWS_WITH_AS(validate_category(t), doctest::Contains("missing composite"), CategoryError);
}

TEST_CASE("validate_category rejects non-associative tables") {
  // Every product of two non-identities is the identity: (x∘x)∘y = y but
  // x∘(x∘y) = x.
  CategoryTables t;
  t.objects = {"o"};
  t.arrows = {{"x", "o", "o"}, {"y", "o", "o"}};
  t.compositions = {{"x", "x", "id_o"}, {"x", "y", "id_o"}, {"y", "x", "id_o"}, {"y", "y", "id_o"}};
  CHECK_THROWS_WITH_AS(validate_category(t), doctest::Contains("associativity"), CategoryError);
}

TEST_CASE("validate_functor") {
  auto w = walking_arrow();
  CHECK_NOTHROW(validate_functor(FunctorTables{{{"a", "a"}, {"b", "b"}}, {{"u", "u"}}}, w, w));
  CHECK_NOTHROW(to_terminal(w));
  FunctorTables bad{{{"a", "a"}, {"b", "b"}}, {{"u", "id_a"}}};
  CHECK_THROWS_WITH_AS(validate_functor(bad, w, w), doctest::Contains("endpoint mismatch"), CategoryError);
  FunctorTables dangling{{{"a", "a"}}, {}};
  CHECK_THROWS_WITH_AS(validate_functor(dangling, w, w), doctest::Contains("dangling"), CategoryError);
}

TEST_CASE("comma categories") {
  auto one = terminal_category();
  auto w = walking_arrow();
  auto idone = identity_functor(one);
  CHECK(comma_category(idone, idone).category->num_arrows() == 1);

  auto pick_b = pick_object(w, object(*w, "b"));
  auto under_b = comma_category(pick_b, identity_functor(w));
  CHECK(under_b.category->num_objects() == 1);
  CHECK(under_b.category->num_arrows() == 1);

  auto over_b = comma_category(identity_functor(w), pick_b);
  CHECK(over_b.category->num_objects() == 2);
  CHECK(over_b.category->num_arrows() == 3);
  std::set<int> structure;
  for (auto [d, dp, u] : over_b.triples) structure.insert(u);
  CHECK(structure == std::set<int>{arrow(*w, "u"), arrow(*w, "id_b")});
}

TEST_CASE("comma of identities is the arrow category") {
  auto se = split_epi_category();
  auto arr = comma_category(identity_functor(se), identity_functor(se));
  CHECK(arr.category->num_objects() == se->num_arrows());
  // Arrows (a, b): u -> v with v∘a = b∘u, counted by brute force.
  int expected = 0;
  for (int u = 0; u < se->num_arrows(); ++u)
    for (int v = 0; v < se->num_arrows(); ++v)
      for (int a : se->hom(se->src(u), se->src(v)))
        for (int b : se->hom(se->tgt(u), se->tgt(v)))
          if (se->compose(v, a) == se->compose(b, u)) ++expected;
  CHECK(arr.category->num_arrows() == expected);
}

TEST_CASE("connected components agree with undirected reachability") {
  CHECK(component_partition(*terminal_category()).size() == 1);
  CHECK(component_partition(*walking_arrow()).size() == 1);
  CHECK(component_partition(*discrete_category(2)).size() == 2);
  std::vector<std::vector<bool>> leq = {{1, 1, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  auto p = poset_category(leq);
  CHECK(connected_components(*p) == reachability_labels(*p));
}

TEST_CASE("elements of sieves") {
  auto w = walking_arrow();
  int b = object(*w, "b");
  auto max = elements_of_sieve(maximal_sieve(w, b));
  CHECK(max.category->num_objects() == 2);
  CHECK(max.category->num_arrows() == 3);
  auto gen = elements_of_sieve(generate_sieve(w, b, {arrow(*w, "u")}));
  CHECK(gen.category->num_objects() == 1);
  CHECK(gen.category->num_arrows() == 1);
  auto empty = elements_of_sieve(generate_sieve(w, b, {}));
  CHECK(empty.category->num_objects() == 0);
}

TEST_CASE("check_adjunction on Walk2 and One") {
  auto w = walking_arrow();
  auto one = terminal_category();
  int a = object(*w, "a"), b = object(*w, "b");
  auto bang = to_terminal(w);
  auto pick_b = pick_object(w, b);
  auto rl = compose(pick_b, bang);
  auto unit = validate_natural(identity_functor(w), rl, {arrow(*w, "u"), arrow(*w, "id_b")});
  auto counit = identity_natural(identity_functor(one));
  CHECK(check_adjunction(bang, pick_b, unit, counit));
  CHECK(check_adjunction(identity_functor(w), identity_functor(w), identity_natural(identity_functor(w)),
                         identity_natural(identity_functor(w))));

  // With pick_a there is no arrow b -> a, so no unit exists; the unit
  // components id_a, id_a? are not even well-typed at b. Use the closest
  // candidate naturality allows and check that validation refuses it.
  auto pick_a = pick_object(w, a);
  auto ra = compose(pick_a, bang);
  CHECK_THROWS_AS(validate_natural(identity_functor(w), ra, {arrow(*w, "id_a"), arrow(*w, "u")}), CategoryError);
}

TEST_CASE("adjunctions induce hom-set bijections") {
  // Galois connection on chains 0<1<2 and 0<1: L(i) = min(i,1), R(j) = j + (j==1)
  std::vector<std::vector<bool>> c3 = {{1, 1, 1}, {0, 1, 1}, {0, 0, 1}};
  std::vector<std::vector<bool>> c2 = {{1, 1}, {0, 1}};
  auto x = poset_category(c3), y = poset_category(c2);
  auto obj_functor = [](const CategoryPtr& s, const CategoryPtr& t, std::vector<int> om) {
    std::vector<int> am(s->num_arrows());
    for (int f = 0; f < s->num_arrows(); ++f) am[f] = t->hom(om[s->src(f)], om[s->tgt(f)])[0];
    return validate_functor(s, t, om, am);
  };
  auto l = obj_functor(x, y, {0, 1, 1});
  auto r = obj_functor(y, x, {0, 2});
  auto rl = compose(r, l), lr = compose(l, r);
  std::vector<int> eta(3), eps(2);
  for (int i = 0; i < 3; ++i) eta[i] = x->hom(i, rl.obj(i))[0];
  for (int j = 0; j < 2; ++j) eps[j] = y->hom(lr.obj(j), j)[0];
  auto unit = validate_natural(identity_functor(x), rl, eta);
  auto counit = validate_natural(lr, identity_functor(y), eps);
  REQUIRE(check_adjunction(l, r, unit, counit));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) CHECK(y->hom(l.obj(i), j).size() == x->hom(i, r.obj(j)).size());
}

TEST_CASE("is_equivalence") {
  auto w = walking_arrow();
  CHECK(is_equivalence(identity_functor(w)).holds);
  CHECK_FALSE(is_equivalence(to_terminal(w)).holds);
  // Two isomorphic objects p, q collapse onto a single-object skeleton.
  CategoryBuilder b2;
  int p = b2.add_object_with_identity("p");
  int q = b2.add_object_with_identity("q");
  int i = b2.add_arrow("i", p, q);
  int j = b2.add_arrow("j", q, p);
  b2.set_composite(j, i, 0);
  b2.set_composite(i, j, 1);
  auto iso2 = b2.build();
  auto incl = pick_object(iso2, 0);
  auto eq = is_equivalence(incl);
  CHECK(eq.holds);
}

TEST_CASE("finite limits") {
  CHECK(has_finite_limits(*terminal_category()));
  CHECK(has_finite_limits(*walking_arrow()));
  CHECK_FALSE(has_finite_limits(*discrete_category(2)));
}
