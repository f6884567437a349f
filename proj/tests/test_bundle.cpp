#include <fstream>
#include <sstream>

#include "doctest.h"
#include "relsite/bundle.hpp"
#include "relsite/samples.hpp"
#include "relsite/site_verify.hpp"

using namespace relsite;

namespace {

std::string corpus(const std::string& file) { return std::string(RELSITE_CORPUS_DIR) + "/" + file; }

std::string error_pointer(const std::string& text) {
  try {
    parse_bundle(text);
  } catch (const BundleError& e) {
    return e.pointer();
  }
  return "no error";
}

// Equal up to the order in which arrows were created.
bool same_by_names(const Category& a, const Category& b) {
  if (a.num_objects() != b.num_objects() || a.num_arrows() != b.num_arrows()) return false;
  for (int o = 0; o < a.num_objects(); ++o)
    if (!b.find_object(a.object_name(o))) return false;
  auto name = [](const Category& c, int x) { return c.object_name(x); };
  for (int f = 0; f < a.num_arrows(); ++f) {
    auto g = b.find_arrow(a.arrow_name(f));
    if (!g || name(a, a.src(f)) != name(b, b.src(*g)) || name(a, a.tgt(f)) != name(b, b.tgt(*g))) return false;
    for (int h : a.arrows_out(a.tgt(f)))
      if (b.arrow_name(b.compose(*b.find_arrow(a.arrow_name(h)), *g)) != a.arrow_name(a.compose(h, f))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("walk2 corpus") {
  Workspace ws = load_bundle(corpus("walk2.bundle"));
  auto sier = sierpinski_site();
  CHECK(same_by_names(*ws.category("Walk2"), *sier.category));
  CHECK(describe(ws.topology("sier").topology) == describe(sier.topology));
  const Topology& sier_j = ws.topology("sier").topology;
  CHECK(ws.topology("trivial").topology == Topology::trivial(sier_j.base()));

  const Grothendieck& g = ws.indexed_category("twopoint").fibration;
  CHECK(describe(g) == describe(grothendieck(two_point(sier.category))));
  CHECK(same_category(ws.category("twopoint.total"), g.total()));
  CHECK(ws.topology("gir").topology == giraud_topology(g, sier_j));

  SiteFunctor p{ws.functor("p").functor, ws.topology("gir").topology, sier_j};
  CHECK(is_comorphism(p).holds);
  // Giraud of the trivial topology is trivial on the 3-object total category
  CHECK(g.total()->num_objects() == 3);
  CHECK(giraud_topology(g, ws.topology("trivial").topology) == Topology::trivial(g.total()));

  Sheafification s = sheafify(ws.presheaf("P").presheaf, sier_j);
  CHECK(s.sheaf.sizes == std::vector<int>{1, 1});
}

TEST_CASE("other corpus bundles") {
  Workspace vee = load_bundle(corpus("vee.bundle"));
  CHECK(same_by_names(*vee.category("Vee"), *vee_site().category));
  CHECK(describe(vee.topology("vee").topology) == describe(vee_site().topology));
  SiteFunctor i{vee.functor("i").functor, vee.topology("sides").topology, vee.topology("vee").topology};
  CHECK(is_dense_morphism(i).holds);
  Workspace split = load_bundle(corpus("split-epi.bundle"));
  CHECK(same_by_names(*split.category("Split"), *split_epi_category()));
  CHECK(describe(split.topology("section").topology) == describe(split_epi_site().topology));
}

TEST_CASE("located errors") {
  CHECK(error_pointer(R"({"categories": {"C": {"objects": ["x"], "arrows": [{"name": "e", "source": "x", "target": "x"}]}}})") ==
        "/categories/C");
  CHECK(error_pointer(R"({"functors": {"F": {"source": "Nope", "target": "Nope"}}})") == "/functors/F/source");
  CHECK(error_pointer(R"({"topologies": {"J": {"category": "Nope"}}})") == "/topologies/J/category");
  CHECK(error_pointer(R"({"categories": {"A/B": {"objects": [1]}}})") == "/categories/A~1B/objects/0");
  CHECK(error_pointer(R"({"categories": {"C": {"objects": ["x"]}}, "topologies": {"J": {"category": "C", "covers": {"x": [["f"]]}}}})") ==
        "/topologies/J/covers/x/0/0");
  CHECK(error_pointer(R"({"topologies": {"G": {"giraud": "X", "base": "J"}}})") == "/topologies/G/giraud");
  CHECK(error_pointer(R"({"categories": {}, "extra": {}})") == "/extra");
  CHECK(error_pointer("{") == "");
  CHECK_THROWS_AS(load_bundle(corpus("missing.bundle")), BundleError);
  CHECK_THROWS_WITH(parse_bundle(R"({"categories": {"C": {"objects": ["x"], "arrows": [{"name": "e", "source": "x", "target": "x"}]}}})"),
                    doctest::Contains("missing composite (e, e)"));
}

TEST_CASE("round trip") {
  for (const char* file : {"walk2.bundle", "vee.bundle", "split-epi.bundle"}) {
    Workspace ws = load_bundle(corpus(file));
    const std::string once = serialize_bundle(ws);
    Workspace again = parse_bundle(once);
    CHECK(same_workspace(ws, again));
    CHECK(serialize_bundle(again) == once);
  }
  for (const auto& kind : instance_kinds())
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
      CAPTURE(kind);
      CAPTURE(seed);
      Workspace ws = generate_instance(kind, seed, {});
      Workspace again = parse_bundle(serialize_bundle(ws));
      CHECK(same_workspace(ws, again));
      CHECK(serialize_bundle(generate_instance(kind, seed, {})) == serialize_bundle(ws));
    }
}

TEST_CASE("generated instances have their kind") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    Workspace co = generate_instance("comorphism", seed, {});
    CHECK(is_comorphism({co.functor("p").functor, co.topology("Gir").topology, co.topology("J").topology}).holds);
    Workspace dense = generate_instance("dense-pair", seed, {});
    CHECK(is_dense_morphism({dense.functor("i").functor, dense.topology("JS").topology, dense.topology("J").topology}).holds);
    Workspace adj = generate_instance("adjoint-pair", seed, {});
    CHECK(check_adjunction(adj.functor("L").functor, adj.functor("R").functor, adj.naturals.at("unit").natural,
                           adj.naturals.at("counit").natural));
    Workspace site = generate_instance("site", seed, {});
    CHECK(is_topology(site.topology("J").topology).holds);
  }
  CHECK_THROWS_AS(generate_instance("nonsense", 0, {}), std::invalid_argument);
}
