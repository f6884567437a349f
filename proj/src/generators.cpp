#include "relsite/generators.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "relsite/site_verify.hpp"

namespace relsite {

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

namespace {

using Leq = std::vector<std::vector<bool>>;

Leq random_order(Rng& rng, int n) {
  Leq leq(n, std::vector<bool>(n, false));
  const double density = std::uniform_real_distribution<double>(0.15, 0.6)(rng);
  for (int i = 0; i < n; ++i) {
    leq[i][i] = true;
    for (int j = i + 1; j < n; ++j) leq[i][j] = coin(rng, density);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;
  return leq;
}

std::vector<std::string> object_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("o" + std::to_string(i));
  return names;
}

template <class T>
void shuffle(Rng& rng, std::vector<T>& v) {
  std::shuffle(v.begin(), v.end(), rng);
}

// pairs (g, f) with g∘f = h, per h
std::vector<std::vector<std::pair<int, int>>> factorizations(const Category& c) {
  std::vector<std::vector<std::pair<int, int>>> out(c.num_arrows());
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.arrows_out(c.tgt(f))) out[c.compose(g, f)].emplace_back(g, f);
  return out;
}

// Depth-first search for arrow maps over a fixed object map. `visit`
// returns false to stop; the node budget bounds unlucky random searches.
class ArrowMapSearch {
 public:
  ArrowMapSearch(const Category& src, const Category& tgt, const std::vector<int>& objects, Rng* rng,
                 long budget)
      : src_(src), tgt_(tgt), objects_(objects), rng_(rng), budget_(budget), map_(src.num_arrows(), -1),
        fact_(factorizations(src)) {}

  bool run(const std::function<bool(const std::vector<int>&)>& visit) { return step(0, visit); }
  bool exhausted() const { return budget_ < 0; }

 private:
  bool consistent(int a) const {
    for (auto [g, f] : fact_[a])
      if (map_[g] >= 0 && map_[f] >= 0 && tgt_.compose(map_[g], map_[f]) != map_[a]) return false;
    for (int g : src_.arrows_out(src_.tgt(a))) {
      const int h = src_.compose(g, a);
      if (map_[g] >= 0 && map_[h] >= 0 && tgt_.compose(map_[g], map_[a]) != map_[h]) return false;
    }
    for (int f : src_.arrows_into(src_.src(a))) {
      const int h = src_.compose(a, f);
      if (map_[f] >= 0 && map_[h] >= 0 && tgt_.compose(map_[a], map_[f]) != map_[h]) return false;
    }
    return true;
  }

  bool step(int a, const std::function<bool(const std::vector<int>&)>& visit) {
    if (--budget_ < 0) return false;
    if (a == src_.num_arrows()) return visit(map_);
    std::vector<int> candidates;
    if (src_.is_identity(a)) {
      candidates.push_back(tgt_.identity(objects_[src_.src(a)]));
    } else {
      auto hom = tgt_.hom(objects_[src_.src(a)], objects_[src_.tgt(a)]);
      candidates.assign(hom.begin(), hom.end());
      if (rng_) shuffle(*rng_, candidates);
    }
    for (int cand : candidates) {
      map_[a] = cand;
      if (consistent(a) && !step(a + 1, visit)) {
        map_[a] = -1;
        return false;
      }
      map_[a] = -1;
    }
    return true;
  }

  const Category& src_;
  const Category& tgt_;
  const std::vector<int>& objects_;
  Rng* rng_;
  long budget_;
  std::vector<int> map_;
  std::vector<std::vector<std::pair<int, int>>> fact_;
};

}  // namespace

CategoryPtr random_poset(Rng& rng, int n) { return poset_category(random_order(rng, n), object_names(n)); }

CategoryPtr random_marked_category(Rng& rng, int n, int marks) {
  const Leq leq = random_order(rng, n);
  std::vector<int> objs(n);
  std::iota(objs.begin(), objs.end(), 0);
  shuffle(rng, objs);
  marks = std::min(marks, n);
  std::vector<int> mark_at(objs.begin(), objs.begin() + marks);
  std::vector<bool> involutive(marks);
  for (int j = 0; j < marks; ++j) involutive[j] = coin(rng, 0.4);
  unsigned xor_bits = 0;
  for (int j = 0; j < marks; ++j)
    if (involutive[j]) xor_bits |= 1U << j;

  CategoryBuilder b;
  std::map<std::tuple<int, int, unsigned>, int> index;
  std::vector<unsigned> label;
  for (int i = 0; i < n; ++i) {
    b.add_object_with_identity("o" + std::to_string(i));
    index[{i, i, 0U}] = b.num_arrows() - 1;
    label.push_back(0U);
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!leq[x][y]) continue;
      unsigned allowed = 0;
      for (int j = 0; j < marks; ++j)
        if (leq[x][mark_at[j]] && leq[mark_at[j]][y]) allowed |= 1U << j;
      for (unsigned m = 0; m <= allowed; ++m) {
        if ((m & ~allowed) != 0 || (x == y && m == 0)) continue;
        std::string name = "o" + std::to_string(x) + "o" + std::to_string(y);
        for (int j = 0; j < marks; ++j)
          if (m & (1U << j)) name += (involutive[j] ? ".t" : ".e") + std::to_string(j);
        index[{x, y, m}] = b.add_arrow(name, x, y);
        label.push_back(m);
      }
    }
  return b.build_with([&](int g, int f) {
    const unsigned mf = label[f], mg = label[g];
    const unsigned m = ((mf | mg) & ~xor_bits) | ((mf ^ mg) & xor_bits);
    return index.at({b.src(f), b.tgt(g), m});
  });
}

CategoryPtr random_category(Rng& rng, int max_objects) {
  const int n = uniform(rng, 1, std::max(1, max_objects));
  const int r = uniform(rng, 0, 99);
  if (r < 50) return random_poset(rng, n);
  if (r < 88) return random_marked_category(rng, n, uniform(rng, 1, std::min(2, n)));
  if (max_objects >= 2) return split_epi_category();
  return random_poset(rng, n);
}

CategoryPtr random_lattice(Rng& rng, int max_objects) {
  max_objects = std::max(1, max_objects);
  for (;;) {
    std::set<unsigned> family{7U};
    const int gens = uniform(rng, 0, 4);
    for (int i = 0; i < gens; ++i) family.insert(static_cast<unsigned>(uniform(rng, 0, 7)));
    bool grew = true;
    while (grew) {
      grew = false;
      for (unsigned a : std::vector<unsigned>(family.begin(), family.end()))
        for (unsigned b : std::vector<unsigned>(family.begin(), family.end()))
          grew = family.insert(a & b).second || grew;
    }
    if (static_cast<int>(family.size()) > max_objects) continue;
    std::vector<unsigned> elems(family.begin(), family.end());
    const int n = static_cast<int>(elems.size());
    Leq leq(n, std::vector<bool>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) leq[i][j] = (elems[i] & ~elems[j]) == 0;
    return poset_category(leq, object_names(n));
  }
}

Coverage random_coverage(Rng& rng, const CategoryPtr& c) {
  Coverage cov(c);
  for (int o = 0; o < c->num_objects(); ++o) {
    if (!coin(rng, 0.5)) continue;
    std::vector<int> candidates;
    for (int a : c->arrows_into(o))
      if (!c->is_identity(a)) candidates.push_back(a);
    if (candidates.empty()) continue;
    const int families = uniform(rng, 1, 2);
    for (int k = 0; k < families; ++k) {
      std::vector<int> family;
      for (int a : candidates)
        if (coin(rng)) family.push_back(a);
      if (family.empty()) family.push_back(candidates[uniform(rng, 0, static_cast<int>(candidates.size()) - 1)]);
      cov.add(o, family);
    }
  }
  return cov;
}

Topology random_topology(Rng& rng, const CategoryPtr& c) {
  const int r = uniform(rng, 0, 99);
  if (r < 15) return Topology::trivial(c);
  if (r < 20) return Topology::degenerate(c);
  return saturate(random_coverage(rng, c));
}

Topology random_subtopology(Rng& rng, const Topology& bound) {
  const CategoryPtr& c = bound.base();
  Coverage cov(c);
  for (int o = 0; o < c->num_objects(); ++o) {
    auto covering = bound.covering(o);
    if (covering.empty() || !coin(rng, 0.6)) continue;
    const int idx = covering[uniform(rng, 0, static_cast<int>(covering.size()) - 1)];
    cov.add(o, bound.lattice().sieve(o, idx).elements());
  }
  return saturate(cov);
}

Functor random_functor(Rng& rng, const CategoryPtr& src, const CategoryPtr& tgt) {
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::vector<int> objects(src->num_objects());
    for (auto& o : objects) o = uniform(rng, 0, tgt->num_objects() - 1);
    std::optional<std::vector<int>> found;
    ArrowMapSearch search(*src, *tgt, objects, &rng, 4000);
    search.run([&](const std::vector<int>& arrows) {
      found = arrows;
      return false;
    });
    if (found) return validate_functor(src, tgt, objects, *found);
  }
  return constant_functor(src, tgt, uniform(rng, 0, tgt->num_objects() - 1));
}

std::vector<Functor> all_functors(const CategoryPtr& src, const CategoryPtr& tgt, std::size_t cap) {
  std::vector<Functor> out;
  std::vector<int> objects(src->num_objects(), 0);
  std::function<bool(int)> rec = [&](int i) {
    if (i == src->num_objects()) {
      ArrowMapSearch search(*src, *tgt, objects, nullptr, 1L << 40);
      return search.run([&](const std::vector<int>& arrows) {
        out.push_back(validate_functor(src, tgt, objects, arrows));
        return out.size() < cap;
      });
    }
    for (int o = 0; o < tgt->num_objects(); ++o) {
      objects[i] = o;
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  if (!rec(0) && out.size() >= cap) throw CapError("more than " + std::to_string(cap) + " functors");
  return out;
}

IndexedCategory random_indexed(Rng& rng, const CategoryPtr& base, int max_fiber) {
  const Category& c = *base;
  std::vector<CategoryPtr> fibers(c.num_objects());
  for (auto& f : fibers) f = random_category(rng, max_fiber);
  const auto fact = factorizations(c);
  for (int attempt = 0; attempt < 30; ++attempt) {
    std::vector<std::optional<Functor>> r(c.num_arrows());
    for (int o = 0; o < c.num_objects(); ++o) r[c.identity(o)] = identity_functor(fibers[o]);
    bool conflict = false;
    for (;;) {
      bool forced = false;
      for (int f = 0; f < c.num_arrows() && !conflict; ++f) {
        if (r[f]) continue;
        for (auto [g, h] : fact[f]) {
          if (g == f || h == f || c.is_identity(g) || c.is_identity(h) || !r[g] || !r[h]) continue;
          Functor candidate = compose(*r[h], *r[g]);
          if (!r[f]) {
            r[f] = candidate;
            forced = true;
          } else if (!(*r[f] == candidate)) {
            conflict = true;
            break;
          }
        }
      }
      if (conflict || forced) {
        if (conflict) break;
        continue;
      }
      int next = -1;
      for (int f = 0; f < c.num_arrows() && next < 0; ++f)
        if (!r[f]) next = f;
      if (next < 0) break;
      const CategoryPtr& from = fibers[c.tgt(next)];
      const CategoryPtr& to = fibers[c.src(next)];
      if (c.src(next) == c.tgt(next) && coin(rng)) r[next] = identity_functor(from);
      else r[next] = random_functor(rng, from, to);
    }
    if (conflict) continue;
    std::vector<Functor> restrictions;
    for (auto& f : r) restrictions.push_back(*f);
    try {
      return validate_indexed(base, fibers, restrictions);
    } catch (const CategoryError&) {
    }
  }
  return constant_indexed(base, fibers[0]);
}

namespace {

bool thin(const Category& c) {
  for (int x = 0; x < c.num_objects(); ++x)
    for (int y = 0; y < c.num_objects(); ++y)
      if (c.hom(x, y).size() > 1) return false;
  return true;
}

bool leq(const Category& c, int x, int y) { return !c.hom(x, y).empty(); }

int meet(const Category& l, int x, int y) {
  for (int z = 0; z < l.num_objects(); ++z) {
    if (!leq(l, z, x) || !leq(l, z, y)) continue;
    bool greatest = true;
    for (int w = 0; w < l.num_objects() && greatest; ++w)
      if (leq(l, w, x) && leq(l, w, y) && !leq(l, w, z)) greatest = false;
    if (greatest) return z;
  }
  throw CategoryError("no meet");
}

// Functor between thin categories determined by its object map.
Functor thin_functor(const CategoryPtr& x, const CategoryPtr& y, const std::vector<int>& objects) {
  std::vector<int> arrows(x->num_arrows());
  for (int a = 0; a < x->num_arrows(); ++a) {
    auto hom = y->hom(objects[x->src(a)], objects[x->tgt(a)]);
    if (hom.empty()) throw CategoryError("object map is not monotone");
    arrows[a] = hom[0];
  }
  return validate_functor(x, y, objects, arrows);
}

}  // namespace

bool is_poset(const Category& c) {
  if (!thin(c)) return false;
  for (int x = 0; x < c.num_objects(); ++x)
    for (int y = x + 1; y < c.num_objects(); ++y)
      if (leq(c, x, y) && leq(c, y, x)) return false;
  return true;
}

IndexedCategory random_cartesian_indexed(Rng& rng, const CategoryPtr& base, int max_fiber) {
  const Category& c = *base;
  auto lattice = random_lattice(rng, max_fiber);
  if (!thin(c)) return constant_indexed(base, lattice);
  const int n = c.num_objects();
  std::vector<int> seed(n), w(n);
  for (auto& s : seed) s = uniform(rng, 0, lattice->num_objects() - 1);
  for (int o = 0; o < n; ++o) {
    // top is the last element of the lattice (the full set)
    int m = lattice->num_objects() - 1;
    for (int o2 = 0; o2 < n; ++o2)
      if (leq(c, o, o2)) m = meet(*lattice, m, seed[o2]);
    w[o] = m;
  }
  std::vector<Subcategory> subs;
  std::vector<std::vector<int>> members(n);
  for (int o = 0; o < n; ++o) {
    for (int x = 0; x < lattice->num_objects(); ++x)
      if (leq(*lattice, x, w[o])) members[o].push_back(x);
    subs.push_back(full_subcategory(lattice, members[o]));
  }
  std::vector<CategoryPtr> fibers;
  for (auto& s : subs) fibers.push_back(s.category);
  std::vector<Functor> restrictions;
  for (int f = 0; f < c.num_arrows(); ++f) {
    const int from = c.tgt(f), to = c.src(f);
    std::vector<int> objects;
    for (int x : members[from]) {
      const int m = meet(*lattice, x, w[to]);
      objects.push_back(static_cast<int>(std::find(members[to].begin(), members[to].end(), m) - members[to].begin()));
    }
    restrictions.push_back(thin_functor(fibers[from], fibers[to], objects));
  }
  return validate_indexed(base, fibers, restrictions);
}

IndexedMap random_indexed_map(Rng& rng, const IndexedCategory& cix) {
  const Category& c = *cix.base;
  const int kind = uniform(rng, 0, 9);
  if (kind == 0) {
    std::vector<Functor> id;
    for (const auto& f : cix.fibers) id.push_back(identity_functor(f));
    return {cix, cix, id};
  }
  if (kind <= 2) {
    auto one = terminal_category();
    std::vector<Functor> bang;
    for (const auto& f : cix.fibers) bang.push_back(to_terminal(f));
    return {cix, constant_indexed(cix.base, one), bang};
  }
  std::vector<std::vector<bool>> keep(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    keep[o].assign(cix.fiber(o).num_objects(), false);
    for (int x = 0; x < cix.fiber(o).num_objects(); ++x) keep[o][x] = coin(rng, 0.6);
    keep[o][uniform(rng, 0, cix.fiber(o).num_objects() - 1)] = true;
  }
  bool grew = true;
  while (grew) {
    grew = false;
    for (int f = 0; f < c.num_arrows(); ++f)
      for (int x = 0; x < cix.fiber(c.tgt(f)).num_objects(); ++x)
        if (keep[c.tgt(f)][x]) {
          const int y = cix.restriction(f).obj(x);
          if (!keep[c.src(f)][y]) grew = keep[c.src(f)][y] = true;
        }
  }
  std::vector<Subcategory> subs;
  std::vector<std::vector<int>> members(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    for (int x = 0; x < cix.fiber(o).num_objects(); ++x)
      if (keep[o][x]) members[o].push_back(x);
    subs.push_back(full_subcategory(cix.fibers[o], members[o]));
  }
  std::vector<CategoryPtr> fibers;
  std::vector<Functor> components;
  for (auto& s : subs) {
    fibers.push_back(s.category);
    components.push_back(s.inclusion);
  }
  std::vector<Functor> restrictions;
  for (int f = 0; f < c.num_arrows(); ++f) {
    const int from = c.tgt(f), to = c.src(f);
    const Functor& r = cix.restriction(f);
    std::map<int, int> back_obj, back_arr;
    for (int i = 0; i < fibers[to]->num_objects(); ++i) back_obj[subs[to].inclusion.obj(i)] = i;
    for (int a = 0; a < fibers[to]->num_arrows(); ++a) back_arr[subs[to].inclusion.arr(a)] = a;
    std::vector<int> objects, arrows;
    for (int i = 0; i < fibers[from]->num_objects(); ++i) objects.push_back(back_obj.at(r.obj(subs[from].inclusion.obj(i))));
    for (int a = 0; a < fibers[from]->num_arrows(); ++a) arrows.push_back(back_arr.at(r.arr(subs[from].inclusion.arr(a))));
    restrictions.push_back(validate_functor(fibers[from], fibers[to], objects, arrows));
  }
  return {validate_indexed(cix.base, fibers, restrictions), cix, components};
}

Presheaf random_presheaf(Rng& rng, const CategoryPtr& base, int bound) {
  const Category& c = *base;
  const auto fact = factorizations(c);
  for (int attempt = 0; attempt < 30; ++attempt) {
    std::vector<int> sizes(c.num_objects());
    for (auto& s : sizes) s = coin(rng, 0.1) ? 0 : uniform(rng, 1, bound);
    bool changed = true;
    while (changed) {
      changed = false;
      for (int f = 0; f < c.num_arrows(); ++f)
        if (sizes[c.src(f)] == 0 && sizes[c.tgt(f)] != 0) {
          sizes[c.tgt(f)] = 0;
          changed = true;
        }
    }
    std::vector<std::optional<std::vector<int>>> act(c.num_arrows());
    for (int o = 0; o < c.num_objects(); ++o) {
      std::vector<int> id(sizes[o]);
      std::iota(id.begin(), id.end(), 0);
      act[c.identity(o)] = id;
    }
    bool conflict = false;
    for (;;) {
      bool forced = false;
      for (int f = 0; f < c.num_arrows() && !conflict; ++f) {
        if (act[f]) continue;
        for (auto [g, h] : fact[f]) {
          if (g == f || h == f || c.is_identity(g) || c.is_identity(h) || !act[g] || !act[h]) continue;
          std::vector<int> candidate;  // P(g∘h) = P(h)∘P(g)
          for (int v : *act[g]) candidate.push_back((*act[h])[v]);
          if (!act[f]) {
            act[f] = candidate;
            forced = true;
          } else if (*act[f] != candidate) {
            conflict = true;
            break;
          }
        }
      }
      if (conflict) break;
      if (forced) continue;
      int next = -1;
      for (int f = 0; f < c.num_arrows() && next < 0; ++f)
        if (!act[f]) next = f;
      if (next < 0) break;
      std::vector<int> map(sizes[c.tgt(next)]);
      const bool endo = c.src(next) == c.tgt(next);
      for (int i = 0; i < static_cast<int>(map.size()); ++i)
        map[i] = endo && coin(rng) ? i : uniform(rng, 0, sizes[c.src(next)] - 1);
      act[next] = map;
    }
    if (conflict) continue;
    std::vector<std::vector<int>> actions;
    for (auto& a : act) actions.push_back(*a);
    try {
      return validate_presheaf(base, sizes, actions);
    } catch (const CategoryError&) {
    }
  }
  return terminal_presheaf(base);
}

Adjunction galois_adjunction(const CategoryPtr& x, const CategoryPtr& y, const std::vector<int>& l,
                             const std::vector<int>& r) {
  Functor lf = thin_functor(x, y, l), rf = thin_functor(y, x, r);
  std::vector<int> eta, eps;
  for (int i = 0; i < x->num_objects(); ++i) eta.push_back(x->hom(i, r[l[i]])[0]);
  for (int j = 0; j < y->num_objects(); ++j) eps.push_back(y->hom(l[r[j]], j)[0]);
  return Adjunction{lf, rf, validate_natural(identity_functor(x), compose(rf, lf), eta),
                    validate_natural(compose(lf, rf), identity_functor(y), eps)};
}

std::optional<Adjunction> random_galois_connection(Rng& rng, const CategoryPtr& x, const CategoryPtr& y) {
  if (!thin(*x) || !thin(*y)) return std::nullopt;
  const int nx = x->num_objects(), ny = y->num_objects();
  std::vector<std::pair<std::vector<int>, std::vector<int>>> found;
  std::vector<int> l(nx);
  std::function<void(int)> rec = [&](int i) {
    if (i == nx) {
      for (int a = 0; a < nx; ++a)
        for (int b = 0; b < nx; ++b)
          if (leq(*x, a, b) && !leq(*y, l[a], l[b])) return;
      std::vector<int> r(ny);
      for (int j = 0; j < ny; ++j) {
        int best = -1;
        for (int a = 0; a < nx; ++a) {
          if (!leq(*y, l[a], j)) continue;
          bool top = true;
          for (int b = 0; b < nx && top; ++b)
            if (leq(*y, l[b], j) && !leq(*x, b, a)) top = false;
          if (top) best = a;
        }
        if (best < 0) return;
        r[j] = best;
      }
      found.emplace_back(l, r);
      return;
    }
    for (int j = 0; j < ny; ++j) {
      l[i] = j;
      rec(i + 1);
    }
  };
  rec(0);
  if (found.empty()) return std::nullopt;
  const auto& [lm, rm] = found[uniform(rng, 0, static_cast<int>(found.size()) - 1)];
  return galois_adjunction(x, y, lm, rm);
}

DenseInclusion random_dense_inclusion(Rng& rng, const CategoryPtr& c, const Topology& j) {
  const int n = c->num_objects();
  std::vector<unsigned> masks;
  for (unsigned m = 1; m + 1 < (1U << n); ++m) masks.push_back(m);
  std::shuffle(masks.begin(), masks.end(), rng);
  masks.push_back((1U << n) - 1);
  for (unsigned m : masks) {
    std::vector<int> objs;
    for (int o = 0; o < n; ++o)
      if (m & (1U << o)) objs.push_back(o);
    auto sub = full_subcategory(c, objs);
    try {
      Topology restricted = induced_image_topology(sub.inclusion, j);
      if (is_dense_morphism({sub.inclusion, restricted, j}).holds)
        return {sub, restricted, static_cast<int>(objs.size()) < n};
    } catch (const NotATopology&) {
    }
  }
  throw CategoryError("identity inclusion is not dense");
}

}  // namespace relsite
