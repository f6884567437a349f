#include "relsite/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "relsite/samples.hpp"
#include "relsite/site_verify.hpp"

namespace relsite {

Trial::Trial(std::uint64_t seed, const Caps& caps, const std::vector<CategoryPtr>* fixed)
    : seed_(seed), caps_(caps), rng_(split_seed(seed, 0)), fixed_(fixed) {}

CategoryPtr Trial::carrier(const std::function<CategoryPtr(Rng&)>& make) {
  const std::size_t k = carriers_.size();
  if (fixed_ && k < fixed_->size()) {
    carriers_.push_back((*fixed_)[k]);
  } else {
    Rng r(split_seed(seed_, 1000 + k));
    carriers_.push_back(make(r));
  }
  return carriers_.back();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string compact(const Category& c) {
  std::ostringstream os;
  os << c.num_objects() << " objects [";
  for (int o = 0; o < c.num_objects(); ++o) os << (o ? " " : "") << c.object_name(o);
  os << "], arrows:";
  for (int a = 0; a < c.num_arrows(); ++a)
    if (!c.is_identity(a)) os << ' ' << c.arrow_name(a) << ':' << c.object_name(c.src(a)) << "->" << c.object_name(c.tgt(a));
  os << ", composites:";
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.arrows_out(c.tgt(f)))
      if (!c.is_identity(f) && !c.is_identity(g))
        os << ' ' << c.arrow_name(g) << '*' << c.arrow_name(f) << '=' << c.arrow_name(c.compose(g, f));
  return os.str();
}

namespace {

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// --- shared pieces -------------------------------------------------------------

CategoryPtr any_category(Trial& t, int max) {
  return t.carrier([max](Rng& r) { return random_category(r, max); });
}

CategoryPtr poset(Trial& t, int max) {
  return t.carrier([max](Rng& r) { return random_poset(r, uniform(r, 1, std::max(1, max))); });
}

CategoryPtr lattice(Trial& t, int max) {
  return t.carrier([max](Rng& r) { return random_lattice(r, max); });
}

std::string witness_text(const Verdict& v) {
  if (!v.witness) return "no witness";
  std::string s = v.witness->condition;
  if (!v.witness->detail.empty()) s += " (" + v.witness->detail + ")";
  return s;
}

// The verdict must hold, and its witnesses must replay.
std::optional<std::string> expect(const std::string& what, const SiteFunctor& s, const Verdict& v) {
  if (!v.holds) return what + " fails: " + witness_text(v);
  for (const auto& w : v.trace)
    if (!evaluate(s, w)) return what + ": trace entry " + w.condition + " does not replay";
  return std::nullopt;
}

// Least topology making p a comorphism, straight from the comorphism
// condition: the preimage of every J-cover on p(d) must cover d.
Topology comorphism_floor(const Functor& p, const Topology& j) {
  Coverage cov(p.source);
  for (int d = 0; d < p.source->num_objects(); ++d)
    for (int idx : j.covering(p.obj(d))) {
      const ArrowSet& s = j.lattice().sieve(p.obj(d), idx);
      std::vector<int> family;
      for (int f : p.source->arrows_into(d))
        if (s.contains(p.arr(f))) family.push_back(f);
      cov.add(d, family);
    }
  return saturate(cov);
}

// Topology on `src` making `f` continuous into (tgt, k): a few random
// candidates, then the trivial topology.
Topology continuous_source(Trial& t, const Functor& f, const Topology& k) {
  for (int attempt = 0; attempt < 6; ++attempt) {
    Topology j = random_topology(t.rng(), f.source);
    if (is_continuous({f, j, k}).holds) {
      t.tally("source topology: random");
      return j;
    }
  }
  t.tally("source topology: trivial");
  return Topology::trivial(f.source);
}

struct FibrationMap {
  Grothendieck source;
  Grothendieck target;
  Functor functor;
};

FibrationMap random_fibration_map(Trial& t, const IndexedCategory& ix) {
  IndexedMap m = random_indexed_map(t.rng(), ix);
  Grothendieck g1 = grothendieck(m.source), g2 = grothendieck(m.target);
  Functor a = total_functor(g1, g2, m.components);
  return {std::move(g1), std::move(g2), std::move(a)};
}

std::optional<Functor> cartesian_functor(Rng& rng, const CategoryPtr& src, const CategoryPtr& tgt) {
  for (int attempt = 0; attempt < 12; ++attempt) {
    Functor f = random_functor(rng, src, tgt);
    if (preserves_finite_limits(f)) return f;
  }
  auto top = find_terminal(*tgt);
  if (!top) return std::nullopt;
  return constant_functor(src, tgt, *top);
}

// --- experiments --------------------------------------------------------------

Outcome topology_soundness(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  Coverage cov = random_coverage(t.rng(), c);
  Topology j = saturate(cov);
  if (auto chk = is_topology(j); !chk.holds) return Outcome::fail("saturate output: " + chk.message);
  if (!(saturate(j) == j)) return Outcome::fail("saturate is not idempotent");
  auto contains_generators = [&](const Topology& k) {
    for (int o = 0; o < c->num_objects(); ++o)
      for (const auto& fam : cov.families[o]) {
        ArrowSet s;
        for (int f : fam) s.insert(f);
        if (!k.covers(o, generate(*c, s))) return false;
      }
    return true;
  };
  if (!contains_generators(j)) return Outcome::fail("saturate output misses a generator");
  if (c->num_objects() <= 3) {
    bool mismatch = false;
    const bool complete = for_each_topology(c, 4096, [&](const Topology& k) {
      if (contains_generators(k) != topology_leq(j, k)) mismatch = true;
      return !mismatch;
    });
    if (mismatch) return Outcome::fail("saturate is not the least topology containing its generators");
    t.tally(complete ? "minimality: exhaustive" : "minimality: truncated");
  }
  auto g = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  if (auto chk = is_topology(giraud_topology(g, j)); !chk.holds) return Outcome::fail("giraud output: " + chk.message);
  auto d = any_category(t, t.caps().base_objects);
  Functor f = random_functor(t.rng(), d, c);
  try {
    Topology induced = induced_image_topology(f, j);
    if (auto chk = is_topology(induced); !chk.holds) return Outcome::fail("induced output: " + chk.message);
    t.tally("induced: topology");
  } catch (const NotATopology&) {
    t.tally("induced: candidate rejected");
  }
  return Outcome::pass();
}

Outcome fibration_soundness(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  auto g = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  for (auto mode : {CartesianMode::strict, CartesianMode::street})
    if (auto chk = is_fibration(g.projection(), mode); !chk.holds) return Outcome::fail("not a fibration: " + chk.message);
  for (int a = 0; a < g.total()->num_arrows(); ++a) {
    const bool table = g.bundle.cartesian.contains(a);
    if (table != is_cartesian_by_fiber_iso(g, a) || table != is_cartesian_arrow(g.projection(), a, CartesianMode::street))
      return Outcome::fail("cartesian table disagrees at " + g.total()->arrow_name(a));
  }
  auto m = random_fibration_map(t, g.indexed);
  if (!is_morphism_of_fibrations(m.functor, identity_functor(c), m.source.bundle, m.target.bundle))
    return Outcome::fail("indexed natural transformation does not give a morphism of fibrations");
  return Outcome::pass();
}

Outcome giraud_minimality(Trial& t) {
  auto c = any_category(t, std::min(3, t.caps().base_objects));
  Topology j = random_topology(t.rng(), c);
  auto g = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  Topology gir = giraud_topology(g, j);
  const Functor& p = g.projection();
  if (auto e = expect("projection comorphism", {p, gir, j}, is_comorphism({p, gir, j}))) return Outcome::fail(*e);
  if (!(comorphism_floor(p, j) == gir)) return Outcome::fail("giraud differs from the least comorphism topology");
  std::optional<std::string> bad;
  auto probe = [&](const Topology& k) {
    if (is_comorphism({p, k, j}).holds != topology_leq(gir, k)) bad = "comorphism topologies are not the up-set of giraud";
    return !bad;
  };
  if (g.total()->lattice().total() <= 256) {
    const bool complete = for_each_topology(g.total(), 2000, probe);
    t.tally(complete ? "enumeration: exhaustive" : "enumeration: truncated at 2000");
  } else {
    t.tally("enumeration: lattice above 256 sieves, sampled");
  }
  for (int i = 0; i < 4 && !bad; ++i) {
    probe(random_topology(t.rng(), g.total()));
    Topology up = gir;
    for (int o = 0; o < g.total()->num_objects(); ++o)
      up.set(o, uniform(t.rng(), 0, g.total()->lattice().count(o) - 1));
    if (!bad) probe(saturate(up));
  }
  if (bad) return Outcome::fail(*bad);
  return Outcome::pass();
}

Outcome giraud_continuity(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  Topology j = random_topology(t.rng(), c);
  auto g = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  Topology gir = giraud_topology(g, j);
  SiteFunctor p{g.projection(), gir, j};
  if (auto e = expect("projection continuity", p, is_continuous(p))) return Outcome::fail(*e);
  if (auto e = expect("projection comorphism", p, is_comorphism(p))) return Outcome::fail(*e);
  auto m = random_fibration_map(t, g.indexed);
  SiteFunctor a{m.functor, giraud_topology(m.source, j), giraud_topology(m.target, j)};
  if (auto e = expect("morphism of fibrations continuity", a, is_continuous(a))) return Outcome::fail(*e);
  return Outcome::pass();
}

Outcome dense_triangle(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  Topology j = random_topology(t.rng(), c);
  DenseInclusion di = random_dense_inclusion(t.rng(), c, j);
  t.tally(di.proper ? "dense: proper subcategory" : "dense: whole category");
  auto d = any_category(t, t.caps().base_objects);
  Topology k = random_topology(t.rng(), d);
  Functor f = random_functor(t.rng(), d, di.sub.category);
  Functor composite = compose(di.sub.inclusion, f);
  const bool alone = is_continuous({f, k, di.topology}).holds;
  const bool through = is_continuous({composite, k, j}).holds;
  t.tally(alone ? "continuous" : "not continuous");
  if (alone != through)
    return Outcome::fail(std::string("continuity of F' is ") + (alone ? "true" : "false") + " but of iF' is " +
                         (through ? "true" : "false"));
  const bool site_alone = is_morphism_of_sites({f, k, di.topology}).holds;
  const bool site_through = is_morphism_of_sites({composite, k, j}).holds;
  if (site_alone != site_through)
    return Outcome::fail(std::string("morphism of sites: F' is ") + (site_alone ? "true" : "false") + ", iF' is " +
                         (site_through ? "true" : "false"));
  return Outcome::pass();
}

Outcome direct_image_cartesian(Trial& t) {
  auto d = any_category(t, t.caps().base_objects);
  auto c = any_category(t, t.caps().base_objects);
  auto dix = grothendieck(random_indexed(t.rng(), d, t.caps().fiber_objects));
  Functor f = random_functor(t.rng(), c, d);
  DirectImage di = direct_image(dix, f);
  if (!(di.pulled.indexed == precompose(dix.indexed, f))) return Outcome::fail("pulled fibers are not Dix∘F");
  if (!is_morphism_of_fibrations(di.q, f, di.pulled.bundle, dix.bundle))
    return Outcome::fail("q is not a morphism of fibrations");
  if (!q_reflects_cartesian(di, dix)) return Outcome::fail("q does not reflect cartesian arrows");
  return Outcome::pass();
}

struct GaloisPair {
  CategoryPtr x;
  CategoryPtr y;
  std::optional<Adjunction> adjunction;
};

// Posets X, Y with L: X -> Y left adjoint to R; fresh pairs are drawn until
// one admits a connection.
GaloisPair galois_pair(Trial& t) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto x = poset(t, t.caps().base_objects);
    auto y = poset(t, t.caps().base_objects);
    if (auto adj = random_galois_connection(t.rng(), x, y)) {
      t.tally("posets drawn", 2 * (attempt + 1));
      return {x, y, adj};
    }
  }
  return {nullptr, nullptr, std::nullopt};
}

// Pointwise left Kan extension of Cix along R's left adjoint, from initial
// objects of the comma categories (d ↓ R) only.
struct PointwiseLan {
  IndexedCategory indexed;
  std::vector<int> apex;   // c0(d)
  std::vector<int> arrow;  // η0_d: d -> R c0(d)
};

std::optional<PointwiseLan> pointwise_lan(const IndexedCategory& cix, const Functor& r) {
  const CategoryPtr& x = r.target;
  const Category& y = *r.source;
  PointwiseLan out;
  for (int d = 0; d < x->num_objects(); ++d) {
    auto comma = comma_category(pick_object(x, d), r);
    auto init = find_initial(*comma.category);
    if (!init) return std::nullopt;
    auto [unit, c0, eta] = comma.triples[*init];
    out.apex.push_back(c0);
    out.arrow.push_back(eta);
  }
  std::vector<CategoryPtr> fibers;
  for (int d = 0; d < x->num_objects(); ++d) fibers.push_back(cix.fibers[out.apex[d]]);
  std::vector<Functor> restrictions;
  for (int g = 0; g < x->num_arrows(); ++g) {
    const int d = x->src(g), d2 = x->tgt(g);
    int k = -1;
    for (int cand : y.hom(out.apex[d], out.apex[d2]))
      if (x->compose(r.arr(cand), out.arrow[d]) == x->compose(out.arrow[d2], g)) k = cand;
    if (k < 0) return std::nullopt;
    restrictions.push_back(cix.restriction(k));
  }
  out.indexed = validate_indexed(x, fibers, restrictions);
  return out;
}

Outcome inverse_image_agreement(Trial& t) {
  auto [x, y, adj] = galois_pair(t);
  if (!adj) return Outcome::skip("no Galois connection between the posets");
  auto cix = grothendieck(random_indexed(t.rng(), y, t.caps().fiber_objects));
  InverseImage inv = inverse_image_adjoint(cix, *adj);
  if (!check_adjunction(inv.comparison)) return Outcome::fail("comparison functors are not adjoint");
  auto lan = pointwise_lan(cix.indexed, adj->right);
  if (!lan) return Outcome::fail("a comma category (d ↓ R) has no initial object");
  auto oracle = grothendieck(lan->indexed);
  const Category& xc = *x;
  const Category& yc = *y;
  std::vector<int> kappa(xc.num_objects());
  for (int d = 0; d < xc.num_objects(); ++d) {
    kappa[d] = -1;
    for (int k : yc.hom(lan->apex[d], adj->left.obj(d)))
      if (xc.compose(adj->right.arr(k), lan->arrow[d]) == adj->unit.at(d)) kappa[d] = k;
    if (kappa[d] < 0) return Outcome::fail("no comparison arrow into L d");
  }
  const Category& total = *oracle.total();
  std::vector<int> objects(total.num_objects()), arrows(total.num_arrows());
  for (int o = 0; o < total.num_objects(); ++o) {
    auto [xo, d] = oracle.object_pair[o];
    objects[o] = inv.pulled.object_of(cix.indexed.restriction(kappa[d]).obj(xo), d);
  }
  for (int a = 0; a < total.num_arrows(); ++a) {
    auto [u, g] = oracle.arrow_pair[a];
    const int x2 = oracle.object_pair[total.tgt(a)].first;
    arrows[a] = inv.pulled.arrow_of(cix.indexed.restriction(kappa[xc.src(g)]).arr(u), g,
                                    cix.indexed.restriction(kappa[xc.tgt(g)]).obj(x2));
  }
  Functor phi = validate_functor(oracle.total(), inv.pulled.total(), objects, arrows);
  if (auto eq = is_equivalence(phi); !eq.holds) return Outcome::fail("oracle comparison is not an equivalence: " + eq.reason);
  return Outcome::pass();
}

// Cones in the source whose image under q is a limit cone and, when `base`
// is given, whose image under `base` is one too, are limit cones.
bool reflects_limits(const Functor& q, const Functor* base) {
  const Category& a = *q.source;
  const Category& b = *q.target;
  auto terminal = [&](int o) { return is_terminal(b, q.obj(o)) && (!base || is_terminal(*base->target, base->obj(o))); };
  auto product = [&](int apex, int p1, int p2) {
    auto image = [&](const Functor& f) { return is_product_cone(*f.target, {f.obj(apex), f.arr(p1), f.arr(p2)}); };
    return image(q) && (!base || image(*base));
  };
  auto equalizer = [&](int f, int g, int e) {
    auto image = [&](const Functor& h) {
      return is_equalizer(*h.target, h.arr(f), h.arr(g), {h.target->src(h.arr(e)), h.arr(e)});
    };
    return image(q) && (!base || image(*base));
  };
  for (int o = 0; o < a.num_objects(); ++o)
    if (terminal(o) && !is_terminal(a, o)) return false;
  for (int x = 0; x < a.num_objects(); ++x)
    for (int y = 0; y < a.num_objects(); ++y)
      for (int apex = 0; apex < a.num_objects(); ++apex)
        for (int p1 : a.hom(apex, x))
          for (int p2 : a.hom(apex, y))
            if (product(apex, p1, p2) && !is_product_cone(a, {apex, p1, p2})) return false;
  for (int f = 0; f < a.num_arrows(); ++f)
    for (int g : a.hom(a.src(f), a.tgt(f)))
      for (int e : a.arrows_into(a.src(f)))
        if (a.compose(f, e) == a.compose(g, e) && equalizer(f, g, e) && !is_equalizer(a, f, g, {a.src(e), e}))
          return false;
  return true;
}

Outcome cartesian_base_change(Trial& t) {
  auto c2 = lattice(t, t.caps().base_objects);
  auto c = lattice(t, t.caps().base_objects);
  auto f = cartesian_functor(t.rng(), c2, c);
  if (!f) return Outcome::skip("no terminal object in the target");
  IndexedCategory cix = random_cartesian_indexed(t.rng(), c, t.caps().fiber_objects);
  if (!is_cartesian_fibration(cix)) return Outcome::fail("generated indexed category is not cartesian");
  IndexedCategory pulled = precompose(cix, *f);
  if (!is_cartesian_fibration(pulled)) return Outcome::fail("Cix∘F is not cartesian");
  DirectImage di = direct_image(grothendieck(cix), *f);
  const Functor base = di.pulled.projection();
  if (!reflects_limits(di.q, &base)) return Outcome::fail("q does not reflect a finite limit cone over a base limit");
  t.tally(reflects_limits(di.q, nullptr) ? "q alone reflects limits" : "q alone does not reflect limits");
  return Outcome::pass();
}

Outcome lifting_conditions(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  Topology j = random_topology(t.rng(), c);
  auto g = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  auto m = random_fibration_map(t, g.indexed);
  const Functor& p = m.target.projection();
  LiftingSquare sq{m.functor, identity_functor(c), p, m.source.projection(), identity_natural(compose(p, m.functor)),
                   giraud_topology(m.target, j)};
  Verdict v = check_prop33_conditions(sq);
  if (!v.holds) return Outcome::fail("lifting conditions fail: " + witness_text(v));
  for (const auto& w : v.trace)
    if (!evaluate(sq, w)) return Outcome::fail("trace entry does not replay");
  return Outcome::pass();
}

Outcome direct_image_continuity(Trial& t) {
  auto c2 = any_category(t, t.caps().base_objects);
  auto c = any_category(t, t.caps().base_objects);
  Topology j = random_topology(t.rng(), c);
  Functor b = random_functor(t.rng(), c2, c);
  Topology j2 = continuous_source(t, b, j);
  auto dix = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  DirectImage di = direct_image(dix, b);
  SiteFunctor q{di.q, giraud_topology(di.pulled, j2), giraud_topology(dix, j)};
  if (auto e = expect("q continuity", q, is_continuous(q))) return Outcome::fail(*e);
  return Outcome::pass();
}

Outcome direct_image_comorphism(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  Topology j = random_topology(t.rng(), c);
  Functor g;
  Topology j2;
  if (coin(t.rng())) {
    // a Giraud projection with small fibers
    auto e = grothendieck(random_indexed(t.rng(), c, std::min(2, t.caps().fiber_objects)));
    g = e.projection();
    j2 = giraud_topology(e, j);
    t.tally("comorphism: giraud projection");
  } else {
    auto c2 = any_category(t, t.caps().base_objects);
    g = random_functor(t.rng(), c2, c);
    Topology floor = comorphism_floor(g, j);
    Topology extra = saturate(random_coverage(t.rng(), c2));
    auto flags = floor.flags();
    for (int o = 0; o < c2->num_objects(); ++o)
      for (int i = 0; i < static_cast<int>(flags[o].size()); ++i) flags[o][i] |= extra.flags()[o][i];
    j2 = saturate(Topology(c2, flags));
    t.tally("comorphism: preimage topology");
  }
  if (!is_comorphism({g, j2, j}).holds) return Outcome::fail("generated functor is not a comorphism");
  auto dix = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  DirectImage di = direct_image(dix, g);
  SiteFunctor q{di.q, giraud_topology(di.pulled, j2), giraud_topology(dix, j)};
  if (auto e = expect("q comorphism", q, is_comorphism(q))) return Outcome::fail(*e);
  return Outcome::pass();
}

Outcome base_change_composition(Trial& t) {
  auto c = poset(t, t.caps().base_objects);
  auto d = poset(t, t.caps().base_objects);
  auto e = poset(t, t.caps().base_objects);
  auto cix = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  Functor f = random_functor(t.rng(), e, d);
  Functor f2 = random_functor(t.rng(), d, c);
  if (auto r = compose_direct_images(cix, f, f2); !r.found) return Outcome::fail("direct images: " + r.reason);
  if (auto r = compose_slices(f, f2, uniform(t.rng(), 0, e->num_objects() - 1)); !r.found)
    return Outcome::fail("representables: " + r.reason);
  auto outer = random_galois_connection(t.rng(), d, c);
  auto inner = random_galois_connection(t.rng(), e, d);
  if (outer && inner) {
    if (auto r = compose_inverse_images(cix, *outer, *inner); !r.found) return Outcome::fail("inverse images: " + r.reason);
    t.tally("adjoint case checked");
  } else {
    t.tally("adjoint case: no Galois connections");
  }
  return Outcome::pass();
}

Outcome dense_direct_image(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  Topology j = random_topology(t.rng(), c);
  DenseInclusion di = random_dense_inclusion(t.rng(), c, j);
  t.tally(di.proper ? "dense: proper subcategory" : "dense: whole category");
  auto dix = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  DirectImage img = direct_image(dix, di.sub.inclusion);
  SiteFunctor q{img.q, giraud_topology(img.pulled, di.topology), giraud_topology(dix, j)};
  if (auto e = expect("q dense", q, is_dense_morphism(q))) return Outcome::fail(*e);
  return Outcome::pass();
}

Outcome structure_morphism(Trial& t) {
  auto [x, y, adj] = galois_pair(t);
  if (!adj) return Outcome::skip("no Galois connection between the posets");
  const Functor& r = adj->right;
  Topology k = random_topology(t.rng(), x);
  Topology j = Topology::trivial(y);
  for (int attempt = 0; attempt < 6; ++attempt) {
    Topology cand = random_topology(t.rng(), y);
    if (is_cover_preserving({r, cand, k}).holds) {
      j = cand;
      break;
    }
  }
  if (auto e = expect("right adjoint as morphism of sites", {r, j, k}, is_morphism_of_sites({r, j, k})))
    return Outcome::fail(*e);
  auto cix = grothendieck(random_indexed(t.rng(), y, t.caps().fiber_objects));
  StructureFunctor sf = structure_functor(cix, *adj);
  if (!(sf.composite == sf.inverse.right)) return Outcome::fail("q∘ζ differs from the right comparison functor");
  SiteFunctor s{sf.composite, giraud_topology(cix, j), giraud_topology(sf.inverse.pulled, k)};
  if (auto e = expect("structure functor", s, is_morphism_of_sites(s))) return Outcome::fail(*e);
  return Outcome::pass();
}

Outcome image_topology(Trial& t) {
  auto c = lattice(t, t.caps().base_objects);
  auto d = lattice(t, t.caps().base_objects);
  auto a = cartesian_functor(t.rng(), c, d);
  if (!a) return Outcome::skip("no terminal object in the target");
  Topology k = random_topology(t.rng(), d);
  Topology induced;
  try {
    induced = induced_image_topology(*a, k);
  } catch (const NotATopology& e) {
    return Outcome::fail(std::string("induced candidate along a cartesian functor: ") + e.what());
  }
  if (auto e = expect("induced morphism of sites", {*a, induced, k}, is_morphism_of_sites({*a, induced, k})))
    return Outcome::fail(*e);
  auto c2 = any_category(t, t.caps().base_objects);
  try {
    induced_image_topology(random_functor(t.rng(), c2, d), k);
    t.tally("arbitrary functor: topology");
  } catch (const NotATopology&) {
    t.tally("arbitrary functor: candidate rejected");
  }
  return Outcome::pass();
}

Outcome giraud_containment(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  Topology j = random_topology(t.rng(), c);
  auto g = grothendieck(random_indexed(t.rng(), c, t.caps().fiber_objects));
  auto m = random_fibration_map(t, g.indexed);
  Topology gir2 = giraud_topology(m.target, j);
  auto flags = gir2.flags();
  Topology extra = saturate(random_coverage(t.rng(), m.target.total()));
  if (coin(t.rng()))
    for (std::size_t o = 0; o < flags.size(); ++o)
      for (std::size_t i = 0; i < flags[o].size(); ++i) flags[o][i] |= extra.flags()[o][i];
  Topology big = saturate(Topology(m.target.total(), flags));
  try {
    Topology induced = induced_image_topology(m.functor, big);
    t.tally("induced: topology");
    if (!topology_leq(giraud_topology(m.source, j), induced)) return Outcome::fail("induced topology misses a giraud cover");
  } catch (const NotATopology&) {
    t.tally("induced: candidate rejected");
  }
  return Outcome::pass();
}

// Partial assignments allowed when enumerating sheaf targets.
constexpr std::uint64_t kPresheafBudget = 2000000;

Outcome sheafify_instance(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  Topology j = random_topology(t.rng(), c);
  Presheaf p = random_presheaf(t.rng(), c, 3);
  Sheafification s = sheafify(p, j);
  if (auto chk = is_sheaf(s.sheaf, j); !chk.holds) return Outcome::fail("sheafify output: " + chk.message);
  if (!is_natural(p, s.sheaf, s.unit)) return Outcome::fail("unit is not natural");
  auto u = check_universal_property(p, j, s, 3, kPresheafBudget);
  if (!u.holds) return Outcome::fail("universal property: " + u.message);
  t.tally("sheaf targets", u.sheaves);
  return Outcome::pass();
}

Outcome continuity_preserves_sheaves(Trial& t) {
  auto c = any_category(t, t.caps().base_objects);
  auto d = any_category(t, t.caps().base_objects);
  Topology j = random_topology(t.rng(), c);
  Topology k = random_topology(t.rng(), d);
  Functor a = random_functor(t.rng(), c, d);
  if (!is_continuous({a, j, k}).holds) {
    t.tally("not continuous");
    return Outcome::pass();
  }
  t.tally("continuous");
  std::optional<std::string> bad;
  auto probe = [&](const Presheaf& q) {
    if (auto chk = is_sheaf(precompose(q, a), j); !chk.holds) bad = "restriction of a sheaf is not a sheaf: " + chk.message;
  };
  for_each_presheaf(d, PresheafSearch{3, kPresheafBudget, true}, [&](const Presheaf& q) {
    if (is_sheaf(q, k).holds) {
      t.tally("sheaf targets");
      probe(q);
    }
    return !bad;
  });
  for (int i = 0; i < 6 && !bad; ++i) probe(sheafify(random_presheaf(t.rng(), d, 3), k).sheaf);
  if (bad) return Outcome::fail(*bad);
  return Outcome::pass();
}

// --- corpus ---------------------------------------------------------------------

using CorpusCheck = std::pair<std::string, std::function<Outcome()>>;

Outcome from(std::optional<std::string> e) { return e ? Outcome::fail(*e) : Outcome::pass(); }

std::vector<CorpusCheck> corpus_for(const std::string& id) {
  std::vector<CorpusCheck> out;
  auto sites = [] { return std::vector<std::pair<std::string, Site>>{
      {"one", {terminal_category(), Topology::trivial(terminal_category())}},
      {"sier", sierpinski_site()},
      {"vee", vee_site()},
      {"split-epi", split_epi_site()}}; };
  if (id == "topology-soundness") {
    for (auto& [name, s] : sites())
      out.push_back({name, [s] { return from(is_topology(s.topology).holds ? std::nullopt : std::optional<std::string>("not a topology")); }});
  } else if (id == "def-2.5-minimality" || id == "thm-2.3") {
    out.push_back({"twopoint-over-sier", [id] {
      auto sier = sierpinski_site();
      auto g = grothendieck(two_point(sier.category));
      Topology gir = giraud_topology(g, sier.topology);
      SiteFunctor p{g.projection(), gir, sier.topology};
      if (id == "thm-2.3") {
        if (auto e = expect("continuity", p, is_continuous(p))) return Outcome::fail(*e);
        return from(expect("comorphism", p, is_comorphism(p)));
      }
      bool ok = true;
      for_each_topology(g.total(), 1U << 20, [&](const Topology& k) {
        ok = is_comorphism({g.projection(), k, sier.topology}).holds == topology_leq(gir, k);
        return ok;
      });
      return ok ? Outcome::pass() : Outcome::fail("comorphism topologies are not the up-set of giraud");
    }});
  } else if (id == "prop-4.6") {
    out.push_back({"vee-sides", [] {
      auto vee = vee_site();
      auto sub = full_subcategory(vee.category, {0, 1});
      Topology restricted = induced_image_topology(sub.inclusion, vee.topology);
      auto dix = grothendieck(constant_indexed(vee.category, walking_arrow()));
      DirectImage img = direct_image(dix, sub.inclusion);
      SiteFunctor q{img.q, giraud_topology(img.pulled, restricted), giraud_topology(dix, vee.topology)};
      return from(expect("q dense", q, is_dense_morphism(q)));
    }});
  } else if (id == "sheafify") {
    out.push_back({"walk2-sier", [] {
      auto sier = sierpinski_site();
      const Category& w = *sier.category;
      const int a = *w.find_object("a"), b = *w.find_object("b");
      std::vector<int> sizes(2);
      sizes[a] = 1;
      sizes[b] = 2;
      std::vector<std::vector<int>> actions(w.num_arrows());
      actions[w.identity(a)] = {0};
      actions[w.identity(b)] = {0, 1};
      actions[*w.find_arrow("u")] = {0, 0};
      Presheaf p = validate_presheaf(sier.category, sizes, actions);
      Sheafification s = sheafify(p, sier.topology);
      if (s.sheaf.sizes != std::vector<int>{1, 1}) return Outcome::fail("sheafification is not the singleton sheaf");
      auto u = check_universal_property(p, sier.topology, s, 3);
      return u.holds ? Outcome::pass() : Outcome::fail(u.message);
    }});
  } else if (id == "prop-2.7-agreement") {
    out.push_back({"chain-galois", [] {
      std::vector<std::vector<bool>> l3(3, std::vector<bool>(3)), l2(2, std::vector<bool>(2));
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) l3[i][j] = true;
      for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j) l2[i][j] = true;
      auto x = poset_category(l3), y = poset_category(l2);
      Adjunction adj = galois_adjunction(x, y, {0, 1, 1}, {0, 2});
      auto cix = grothendieck(representable_indexed(y, 1));
      InverseImage inv = inverse_image_adjoint(cix, adj);
      auto lan = pointwise_lan(cix.indexed, adj.right);
      if (!lan) return Outcome::fail("no pointwise extension");
      return is_equivalence(validate_functor(grothendieck(lan->indexed).total(), inv.pulled.total(),
                                             [&] {
                                               std::vector<int> v;
                                               auto g = grothendieck(lan->indexed);
                                               for (int o = 0; o < g.total()->num_objects(); ++o) {
                                                 auto [xo, d] = g.object_pair[o];
                                                 v.push_back(inv.pulled.object_of(xo, d));
                                               }
                                               return v;
                                             }(),
                                             [&] {
                                               std::vector<int> v;
                                               auto g = grothendieck(lan->indexed);
                                               for (int a = 0; a < g.total()->num_arrows(); ++a) {
                                                 auto [u, f] = g.arrow_pair[a];
                                                 v.push_back(inv.pulled.arrow_of(
                                                     u, f, g.object_pair[g.total()->tgt(a)].first));
                                               }
                                               return v;
                                             }()))
                     .holds
                 ? Outcome::pass()
                 : Outcome::fail("not an equivalence");
    }});
  }
  return out;
}

// --- registry ---------------------------------------------------------------------

struct Experiment {
  std::string id;
  ExperimentBody body;
};

const std::vector<Experiment>& registry() {
  static const std::vector<Experiment> all = {
      {"topology-soundness", topology_soundness},
      {"def-2.2-fibration", fibration_soundness},
      {"def-2.5-minimality", giraud_minimality},
      {"thm-2.3", giraud_continuity},
      {"prop-2.4", dense_triangle},
      {"prop-2.5", direct_image_cartesian},
      {"prop-2.7-agreement", inverse_image_agreement},
      {"prop-2.9", cartesian_base_change},
      {"prop-3.3", lifting_conditions},
      {"prop-3.4", direct_image_continuity},
      {"prop-4.2", direct_image_comorphism},
      {"prop-4.4", base_change_composition},
      {"prop-4.6", dense_direct_image},
      {"prop-4.7", structure_morphism},
      {"prop-4.11", image_topology},
      {"prop-4.12-containment", giraud_containment},
      {"sheafify", sheafify_instance},
      {"continuity-sheaves", continuity_preserves_sheaves},
  };
  return all;
}

const Experiment& lookup(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return e;
  throw std::invalid_argument("unknown experiment id: " + id);
}

Outcome guarded(const std::function<Outcome()>& run) {
  try {
    return run();
  } catch (const CapError& e) {
    return Outcome::skip(std::string("cap: ") + e.what());
  } catch (const std::exception& e) {
    return Outcome::fail(std::string("unexpected error: ") + e.what());
  }
}

Outcome run_once(const Experiment& e, std::uint64_t seed, const Caps& caps, int instance,
                 const std::vector<CategoryPtr>* fixed, Trial** keep = nullptr) {
  static thread_local std::optional<Trial> last;
  last.emplace(split_seed(seed, static_cast<std::uint64_t>(instance)), caps, fixed);
  Trial& t = *last;
  Outcome o = guarded([&] { return e.body(t); });
  if (keep) *keep = &t;
  return o;
}

std::vector<CategoryPtr> shrink(const Experiment& e, std::uint64_t seed, const Caps& caps, int instance,
                                std::vector<CategoryPtr> carriers) {
  bool progress = true;
  int rounds = 0;
  while (progress && rounds++ < 64) {
    progress = false;
    for (std::size_t k = 0; k < carriers.size() && !progress; ++k) {
      const int n = carriers[k]->num_objects();
      if (n <= 1) continue;
      for (int o = 0; o < n && !progress; ++o) {
        std::vector<int> keep;
        for (int i = 0; i < n; ++i)
          if (i != o) keep.push_back(i);
        auto candidate = carriers;
        candidate[k] = full_subcategory(carriers[k], keep).category;
        if (run_once(e, seed, caps, instance, &candidate).kind == Outcome::Kind::fail) {
          carriers = std::move(candidate);
          progress = true;
        }
      }
    }
  }
  return carriers;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& e : registry()) v.push_back(e.id);
    return v;
  }();
  return ids;
}

bool has_experiment(const std::string& id) {
  const auto& ids = experiment_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

Outcome replay_instance(const std::string& id, std::uint64_t seed, const Caps& caps, int instance) {
  return run_once(lookup(id), seed, caps, instance, nullptr);
}

std::vector<CategoryPtr> shrink_instance(const std::string& id, std::uint64_t seed, const Caps& caps, int instance) {
  const Experiment& e = lookup(id);
  Trial* t = nullptr;
  if (run_once(e, seed, caps, instance, nullptr, &t).kind != Outcome::Kind::fail) return {};
  return shrink(e, seed, caps, instance, t->carriers());
}

namespace {

Report run_suite(const Experiment& e, const std::vector<CorpusCheck>& corpus, std::uint64_t seed, const Caps& caps) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.id = e.id;
  r.seed = seed;
  r.caps = caps;
  for (const auto& [label, check] : corpus) {
    ++r.corpus_checks;
    Outcome o = guarded(check);
    if (o.kind == Outcome::Kind::fail) r.failures.push_back({-1, "corpus " + label, o.message, {}, true});
  }
  for (int i = 0; i < caps.instances; ++i) {
    Trial* t = nullptr;
    Outcome o = run_once(e, seed, caps, i, nullptr, &t);
    ++r.instances;
    for (const auto& [k, v] : t->tallies()) r.tallies[k] += v;
    if (o.kind == Outcome::Kind::pass) {
      ++r.passed;
    } else if (o.kind == Outcome::Kind::skip) {
      ++r.skipped;
      r.tallies["skipped: " + o.message.substr(0, o.message.find(':'))] += 1;
    } else {
      FailureRecord f{i, "instance " + std::to_string(i), o.message, {}, false};
      auto carriers = shrink(e, seed, caps, i, t->carriers());
      for (std::size_t k = 0; k < carriers.size(); ++k)
        f.shrunk.push_back("carrier " + std::to_string(k) + ": " + compact(*carriers[k]));
      f.replay_fails = run_once(e, seed, caps, i, &carriers).kind == Outcome::Kind::fail;
      r.failures.push_back(std::move(f));
    }
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

Report run_experiment(const std::string& id, std::uint64_t seed, const Caps& caps) {
  return run_suite(lookup(id), corpus_for(id), seed, caps);
}

Report run_experiment(const std::string& id, const ExperimentBody& body, std::uint64_t seed, const Caps& caps) {
  return run_suite({id, body}, {}, seed, caps);
}

std::string Report::text() const {
  std::ostringstream body;
  body << "experiment " << id << '\n';
  body << "seed " << seed << '\n';
  body << "caps base=" << caps.base_objects << " fiber=" << caps.fiber_objects << " instances=" << caps.instances
       << '\n';
  body << "corpus checks " << corpus_checks << '\n';
  std::ostringstream fails;
  for (const auto& f : failures) {
    fails << "FAIL " << f.label << ": " << f.message << '\n';
    for (const auto& s : f.shrunk) fails << "  shrunk " << s << '\n';
    if (f.instance >= 0) {
      fails << "  shrunk replay " << (f.replay_fails ? "fails" : "passes") << '\n';
      fails << "  replay: prop " << id << " --seed " << seed << " --instance " << f.instance << '\n';
    }
  }
  body << fails.str();
  for (const auto& [k, v] : tallies) body << "tally " << k << " = " << v << '\n';
  body << "result " << (failures.empty() ? "pass" : "fail") << '\n';
  const std::string head = body.str();
  std::ostringstream out;
  out << head;
  out << "--- trailer\n";
  out << "id: " << id << '\n';
  out << "seed: " << seed << '\n';
  out << "caps: base=" << caps.base_objects << ",fiber=" << caps.fiber_objects << ",instances=" << caps.instances
      << '\n';
  out << "instances: " << instances << '\n';
  out << "passed: " << passed << '\n';
  out << "skipped: " << skipped << '\n';
  out << "failures: " << failures.size() << '\n';
  out << "failure-digest: " << hex(fnv1a(fails.str())) << '\n';
  out << "report-digest: " << hex(fnv1a(head)) << '\n';
  return out.str();
}

const std::vector<CoverageEntry>& coverage_ledger() {
  static const std::vector<CoverageEntry> ledger = {
      {"saturation, induced and Giraud outputs are topologies", "topology-soundness"},
      {"comma categories feed the continuity and Kan-extension checks", "prop-2.7-agreement"},
      {"cartesian arrows and fibrations", "def-2.2-fibration"},
      {"morphisms of fibrations", "def-2.2-fibration"},
      {"Giraud topology is the least comorphism topology", "def-2.5-minimality"},
      {"projections are continuous comorphisms", "thm-2.3"},
      {"morphisms of fibrations are continuous", "thm-2.3"},
      {"continuity through a dense morphism", "prop-2.4"},
      {"direct image and reflection of cartesian arrows", "prop-2.5"},
      {"adjoint-case inverse image and its comparison pair", "prop-2.7-agreement"},
      {"cartesian fibrations and reflection of finite limits", "prop-2.9"},
      {"site-level lifting conditions for a square", "prop-3.3"},
      {"direct-image projection is continuous", "prop-3.4"},
      {"direct-image projection is a comorphism", "prop-4.2"},
      {"composition of base changes", "prop-4.4"},
      {"direct image along a dense morphism", "prop-4.6"},
      {"structure functor is a morphism of sites", "prop-4.7"},
      {"induced topology along a cartesian functor", "prop-4.11"},
      {"induced topology contains Giraud's", "prop-4.12-containment"},
      {"sheafification and its universal property", "sheafify"},
      {"continuous functors preserve sheaves", "continuity-sheaves"},
  };
  return ledger;
}

std::vector<CoverageEntry> missing_coverage() {
  std::vector<CoverageEntry> out;
  for (const auto& e : coverage_ledger())
    if (!has_experiment(e.experiment)) out.push_back(e);
  return out;
}

}  // namespace relsite
