#include "relsite/sheaf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace relsite {

std::string Presheaf::label(int c, int x) const {
  if (c < static_cast<int>(labels.size()) && x < static_cast<int>(labels[c].size())) return labels[c][x];
  return std::to_string(x);
}

Presheaf validate_presheaf(CategoryPtr base, std::vector<int> sizes, std::vector<std::vector<int>> actions) {
  const Category& c = *base;
  if (static_cast<int>(sizes.size()) != c.num_objects()) throw CategoryError("presheaf: missing value set");
  if (static_cast<int>(actions.size()) != c.num_arrows()) throw CategoryError("presheaf: missing action");
  for (int f = 0; f < c.num_arrows(); ++f) {
    const auto& act = actions[f];
    if (static_cast<int>(act.size()) != sizes[c.tgt(f)])
      throw CategoryError("presheaf: action of " + c.arrow_name(f) + " has the wrong domain");
    for (int y : act)
      if (y < 0 || y >= sizes[c.src(f)])
        throw CategoryError("presheaf: action of " + c.arrow_name(f) + " leaves its codomain");
  }
  for (int o = 0; o < c.num_objects(); ++o)
    for (int x = 0; x < sizes[o]; ++x)
      if (actions[c.identity(o)][x] != x) throw CategoryError("presheaf: identity acts non-trivially at " + c.object_name(o));
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.arrows_out(c.tgt(f))) {
      const int gf = c.compose(g, f);
      for (int x = 0; x < sizes[c.tgt(g)]; ++x)
        if (actions[gf][x] != actions[f][actions[g][x]])
          throw CategoryError("presheaf: not functorial at (" + c.arrow_name(g) + ", " + c.arrow_name(f) + ")");
    }
  return Presheaf{std::move(base), std::move(sizes), std::move(actions), {}};
}

Presheaf representable_presheaf(const CategoryPtr& base, int d) {
  const Category& c = *base;
  std::vector<int> sizes(c.num_objects());
  std::vector<std::vector<std::string>> labels(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    sizes[o] = static_cast<int>(c.hom(o, d).size());
    for (int g : c.hom(o, d)) labels[o].push_back(c.arrow_name(g));
  }
  std::vector<std::vector<int>> actions(c.num_arrows());
  for (int f = 0; f < c.num_arrows(); ++f) {
    auto from = c.hom(c.tgt(f), d);
    auto to = c.hom(c.src(f), d);
    for (int g : from)
      actions[f].push_back(static_cast<int>(std::find(to.begin(), to.end(), c.compose(g, f)) - to.begin()));
  }
  auto p = validate_presheaf(base, std::move(sizes), std::move(actions));
  p.labels = std::move(labels);
  return p;
}

Presheaf terminal_presheaf(const CategoryPtr& base) {
  return validate_presheaf(base, std::vector<int>(base->num_objects(), 1),
                           std::vector<std::vector<int>>(base->num_arrows(), std::vector<int>{0}));
}

Presheaf precompose(const Presheaf& p, const Functor& f) {
  if (!same_category(f.target, p.base)) throw CategoryError("precompose: functor does not land in the base");
  Presheaf out;
  out.base = f.source;
  for (int c = 0; c < f.source->num_objects(); ++c) {
    out.sizes.push_back(p.sizes[f.obj(c)]);
    if (!p.labels.empty()) out.labels.push_back(p.labels[f.obj(c)]);
  }
  for (int a = 0; a < f.source->num_arrows(); ++a) out.actions.push_back(p.actions[f.arr(a)]);
  return out;
}

bool is_natural(const Presheaf& p, const Presheaf& q, const PresheafMap& m) {
  const Category& c = *p.base;
  for (int o = 0; o < c.num_objects(); ++o) {
    if (static_cast<int>(m.components[o].size()) != p.size(o)) return false;
    for (int y : m.components[o])
      if (y < 0 || y >= q.size(o)) return false;
  }
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int x = 0; x < p.size(c.tgt(f)); ++x)
      if (m.components[c.src(f)][p.act(f, x)] != q.act(f, m.components[c.tgt(f)][x])) return false;
  return true;
}

PresheafMap compose(const PresheafMap& second, const PresheafMap& first) {
  PresheafMap out;
  for (std::size_t o = 0; o < first.components.size(); ++o) {
    std::vector<int> comp;
    for (int x : first.components[o]) comp.push_back(second.components[o][x]);
    out.components.push_back(std::move(comp));
  }
  return out;
}

bool is_iso(const Presheaf& p, const Presheaf& q, const PresheafMap& m) {
  for (std::size_t o = 0; o < m.components.size(); ++o) {
    if (p.sizes[o] != q.sizes[o]) return false;
    std::vector<char> hit(q.sizes[o]);
    for (int y : m.components[o]) {
      if (hit[y]) return false;
      hit[y] = 1;
    }
  }
  return true;
}

std::vector<std::vector<int>> matching_families(const Presheaf& p, const ArrowSet& sieve) {
  const Category& c = *p.base;
  const auto arrows = sieve.elements();
  const int n = static_cast<int>(arrows.size());
  std::vector<int> pos(c.num_arrows(), -1);
  for (int i = 0; i < n; ++i) pos[arrows[i]] = i;
  std::vector<std::vector<int>> out;
  std::vector<int> vals(n, -1);
  auto consistent = [&](int i) {
    const int h = arrows[i];
    for (int g : c.arrows_into(c.src(h))) {
      const int k = pos[c.compose(h, g)];
      if (k >= 0 && k <= i && vals[k] != p.act(g, vals[i])) return false;
    }
    for (int j = 0; j < i; ++j) {
      const int f = arrows[j];
      for (int g : c.hom(c.src(h), c.src(f)))
        if (c.compose(f, g) == h && p.act(g, vals[j]) != vals[i]) return false;
    }
    return true;
  };
  auto search = [&](auto&& self, int i) -> void {
    if (i == n) {
      out.push_back(vals);
      return;
    }
    for (int v = 0; v < p.size(c.src(arrows[i])); ++v) {
      vals[i] = v;
      if (consistent(i)) self(self, i + 1);
    }
    vals[i] = -1;
  };
  search(search, 0);
  return out;
}

namespace {

std::vector<int> restrict_element(const Presheaf& p, const std::vector<int>& arrows, int x) {
  std::vector<int> fam;
  for (int f : arrows) fam.push_back(p.act(f, x));
  return fam;
}

}  // namespace

SheafCheck is_sheaf(const Presheaf& p, const Topology& j) {
  if (!same_category(p.base, j.base())) throw CategoryError("is_sheaf: presheaf and topology live on different categories");
  const Category& c = *p.base;
  const auto& lat = j.lattice();
  SheafCheck out;
  for (int o = 0; o < c.num_objects(); ++o)
    for (int idx : j.covering(o)) {
      const ArrowSet& s = lat.sieve(o, idx);
      const auto arrows = s.elements();
      std::map<std::vector<int>, int> count;
      for (int x = 0; x < p.size(o); ++x) ++count[restrict_element(p, arrows, x)];
      for (const auto& fam : matching_families(p, s)) {
        auto it = count.find(fam);
        const int n = it == count.end() ? 0 : it->second;
        if (n != 1) {
          out.holds = false;
          out.object = o;
          out.sieve = s;
          out.family = fam;
          out.amalgamations = n;
          out.message = "matching family on a cover of " + c.object_name(o) + " has " + std::to_string(n) +
                        " amalgamations";
          return out;
        }
      }
    }
  return out;
}

PlusResult plus(const Presheaf& p, const Topology& j) {
  if (!same_category(p.base, j.base())) throw CategoryError("plus: presheaf and topology live on different categories");
  const Category& c = *p.base;
  const auto& lat = j.lattice();
  const int n = c.num_objects();
  PlusResult out;
  out.least_cover.resize(n);
  std::vector<std::vector<std::vector<int>>> families(n);
  std::vector<std::map<std::vector<int>, int>> index(n);
  std::vector<std::vector<int>> pos(n, std::vector<int>(c.num_arrows(), -1));
  std::vector<std::vector<int>> cover_arrows(n);
  for (int o = 0; o < n; ++o) {
    ArrowSet least = lat.sieve(o, lat.maximal(o));
    for (int idx : j.covering(o)) least &= lat.sieve(o, idx);
    if (!j.covers(o, least)) throw CategoryError("plus: covers at " + c.object_name(o) + " are not closed under meets");
    out.least_cover[o] = least;
    cover_arrows[o] = least.elements();
    for (int i = 0; i < static_cast<int>(cover_arrows[o].size()); ++i) pos[o][cover_arrows[o][i]] = i;
    families[o] = matching_families(p, least);
    for (int i = 0; i < static_cast<int>(families[o].size()); ++i) index[o].emplace(families[o][i], i);
  }
  std::vector<int> sizes(n);
  std::vector<std::vector<std::string>> labels(n);
  for (int o = 0; o < n; ++o) {
    sizes[o] = static_cast<int>(families[o].size());
    for (const auto& fam : families[o]) {
      std::string l = "<";
      for (std::size_t i = 0; i < fam.size(); ++i)
        l += (i ? "," : "") + c.arrow_name(cover_arrows[o][i]) + ":" + p.label(c.src(cover_arrows[o][i]), fam[i]);
      labels[o].push_back(l + ">");
    }
  }
  std::vector<std::vector<int>> actions(c.num_arrows());
  for (int f = 0; f < c.num_arrows(); ++f) {
    const int d = c.src(f), t = c.tgt(f);
    for (const auto& fam : families[t]) {
      std::vector<int> pulled;
      for (int g : cover_arrows[d]) {
        const int k = pos[t][c.compose(f, g)];
        if (k < 0) throw CategoryError("plus: least covers are not stable");
        pulled.push_back(fam[k]);
      }
      actions[f].push_back(index[d].at(pulled));
    }
  }
  out.presheaf = validate_presheaf(p.base, std::move(sizes), std::move(actions));
  out.presheaf.labels = std::move(labels);
  for (int o = 0; o < n; ++o) {
    std::vector<int> comp;
    for (int x = 0; x < p.size(o); ++x) comp.push_back(index[o].at(restrict_element(p, cover_arrows[o], x)));
    out.unit.components.push_back(std::move(comp));
  }
  return out;
}

Sheafification sheafify(const Presheaf& p, const Topology& j) {
  auto once = plus(p, j);
  auto twice = plus(once.presheaf, j);
  return Sheafification{std::move(twice.presheaf), compose(twice.unit, once.unit)};
}

void for_each_presheaf(const CategoryPtr& base, const PresheafSearch& opts,
                       const std::function<bool(const Presheaf&)>& visit) {
  const int bound = opts.bound;
  const std::uint64_t budget = opts.budget;
  const Category& c = *base;
  const int n = c.num_objects();
  // Arrows that are composites of already placed ones go next: their action
  // is forced, so only the remaining generators are enumerated.
  std::vector<int> arrows;
  std::vector<int> rank(c.num_arrows(), -1);
  std::vector<int> forced_by(c.num_arrows(), -1);  // g with g∘f = arrow for a placed pair
  std::vector<int> forced_f(c.num_arrows(), -1);
  auto place = [&](int a) {
    rank[a] = static_cast<int>(arrows.size());
    arrows.push_back(a);
  };
  int free_arrows = 0;
  for (int a = 0; a < c.num_arrows(); ++a) free_arrows += c.is_identity(a) ? 0 : 1;
  while (static_cast<int>(arrows.size()) < free_arrows) {
    int next = -1;
    for (int f : arrows) {
      for (int g : arrows)
        if (c.tgt(f) == c.src(g) && rank[c.compose(g, f)] < 0 && !c.is_identity(c.compose(g, f))) {
          next = c.compose(g, f);
          forced_by[next] = g;
          forced_f[next] = f;
          break;
        }
      if (next >= 0) break;
    }
    if (next < 0)
      for (int a = 0; a < c.num_arrows() && next < 0; ++a)
        if (!c.is_identity(a) && rank[a] < 0) next = a;
    place(next);
  }
  // composite constraints P(g∘f) = P(f)∘P(g), checked once all three are set
  std::vector<std::vector<std::array<int, 3>>> ready(arrows.size());
  for (int f : arrows)
    for (int g : c.arrows_out(c.tgt(f))) {
      if (c.is_identity(g)) continue;
      const int k = c.compose(g, f);
      const int r = std::max({rank[f], rank[g], rank[k]});
      ready[r].push_back({g, f, k});
    }
  std::vector<int> sizes(n, 0);
  Presheaf p;
  p.base = base;
  p.actions.assign(c.num_arrows(), {});
  bool stop = false;
  std::uint64_t nodes = 0;
  // Orderly generation: relabelings σ (a permutation of every P(c)) still tied
  // with the identity on the blocks placed so far. A partial table that some
  // σ sends strictly below itself is not the least of its orbit.
  std::vector<std::vector<std::vector<int>>> perms(n);  // perms[c] = permutations of P(c)
  std::vector<std::vector<int>> relabelings;            // per σ: index into perms[c]
  std::vector<std::vector<int>> tied(arrows.size() + 1);
  auto relabeled_cmp = [&](const std::vector<int>& sigma, int f) {
    const auto& act = p.actions[f];
    const auto& ps = perms[c.src(f)][sigma[c.src(f)]];
    const auto& pt = perms[c.tgt(f)][sigma[c.tgt(f)]];
    // σ·P(f) = σ_src ∘ P(f) ∘ σ_tgt^{-1}, compared position by position
    std::vector<int> inv(pt.size());
    for (std::size_t x = 0; x < pt.size(); ++x) inv[pt[x]] = static_cast<int>(x);
    for (std::size_t y = 0; y < act.size(); ++y) {
      const int v = ps[act[inv[y]]];
      if (v != act[y]) return v < act[y] ? -1 : 1;
    }
    return 0;
  };
  auto search = [&](auto&& self, int i) -> void {
    if (stop) return;
    if (budget && ++nodes > budget) throw CapError("presheaf enumeration exceeds " + std::to_string(budget) + " steps");
    if (i == static_cast<int>(arrows.size())) {
      if (!visit(p)) stop = true;
      return;
    }
    const int f = arrows[i];
    const int from = sizes[c.tgt(f)], to = sizes[c.src(f)];
    auto& act = p.actions[f];
    act.assign(from, 0);
    if (from > 0 && to == 0) return;
    const bool forced = forced_by[f] >= 0;
    if (forced)
      for (int x = 0; x < from; ++x) act[x] = p.actions[forced_f[f]][p.actions[forced_by[f]][x]];
    for (;;) {
      bool ok = true;
      for (const auto& [g, ff, k] : ready[i]) {
        for (int x = 0; x < sizes[c.tgt(g)] && ok; ++x)
          if (p.actions[k][x] != p.actions[ff][p.actions[g][x]]) ok = false;
        if (!ok) break;
      }
      if (ok && opts.up_to_iso) {
        tied[i + 1].clear();
        for (int sg : tied[i]) {
          const int cmp = relabeled_cmp(relabelings[sg], f);
          if (cmp < 0) {
            ok = false;
            break;
          }
          if (cmp == 0) tied[i + 1].push_back(sg);
        }
      }
      if (ok) self(self, i + 1);
      if (stop || forced) return;
      int pos = 0;
      while (pos < from && ++act[pos] == to) act[pos++] = 0;
      if (pos == from) return;
    }
  };
  for (;;) {
    p.sizes = sizes;
    for (int o = 0; o < n; ++o) {
      p.actions[c.identity(o)].resize(sizes[o]);
      for (int x = 0; x < sizes[o]; ++x) p.actions[c.identity(o)][x] = x;
    }
    if (opts.up_to_iso) {
      for (int o = 0; o < n; ++o) {
        perms[o].clear();
        std::vector<int> v(sizes[o]);
        std::iota(v.begin(), v.end(), 0);
        do perms[o].push_back(v);
        while (std::next_permutation(v.begin(), v.end()));
      }
      relabelings.clear();
      std::vector<int> sigma(n, 0);
      for (;;) {
        int pos = 0;
        while (pos < n && ++sigma[pos] == static_cast<int>(perms[pos].size())) sigma[pos++] = 0;
        if (pos == n) break;
        relabelings.push_back(sigma);
      }
      tied[0].resize(relabelings.size());
      std::iota(tied[0].begin(), tied[0].end(), 0);
    }
    search(search, 0);
    if (stop) return;
    int pos = 0;
    while (pos < n && ++sizes[pos] > bound) sizes[pos++] = 0;
    if (pos == n) return;
  }
}

void for_each_presheaf(const CategoryPtr& base, int bound, const std::function<bool(const Presheaf&)>& visit) {
  for_each_presheaf(base, PresheafSearch{bound}, visit);
}

void for_each_natural_map(const Presheaf& p, const Presheaf& q, const std::function<bool(const PresheafMap&)>& visit) {
  const Category& c = *p.base;
  const int n = c.num_objects();
  PresheafMap m;
  m.components.resize(n);
  bool stop = false;
  auto search = [&](auto&& self, int o) -> void {
    if (stop) return;
    if (o == n) {
      if (!visit(m)) stop = true;
      return;
    }
    const int from = p.size(o), to = q.size(o);
    auto& comp = m.components[o];
    comp.assign(from, 0);
    if (from > 0 && to == 0) return;
    for (;;) {
      bool ok = true;
      for (int f = 0; f < c.num_arrows() && ok; ++f) {
        const int a = c.src(f), b = c.tgt(f);
        if (a > o || b > o || (a != o && b != o)) continue;
        for (int x = 0; x < p.size(b) && ok; ++x)
          if (m.components[a][p.act(f, x)] != q.act(f, m.components[b][x])) ok = false;
      }
      if (ok) self(self, o + 1);
      if (stop) return;
      int pos = 0;
      while (pos < from && ++comp[pos] == to) comp[pos++] = 0;
      if (pos == from) return;
    }
  };
  search(search, 0);
}

UniversalCheck check_universal_property(const Presheaf& p, const Topology& j, const Sheafification& s, int bound,
                                        std::uint64_t budget) {
  const PresheafSearch search{bound, budget, true};
  UniversalCheck out;
  for_each_presheaf(p.base, search, [&](const Presheaf& q) {
    if (!is_sheaf(q, j).holds) return true;
    ++out.sheaves;
    std::map<std::vector<std::vector<int>>, int> factorizations;
    for_each_natural_map(s.sheaf, q, [&](const PresheafMap& beta) {
      ++factorizations[compose(beta, s.unit).components];
      return true;
    });
    for_each_natural_map(p, q, [&](const PresheafMap& alpha) {
      ++out.maps;
      auto it = factorizations.find(alpha.components);
      const int n = it == factorizations.end() ? 0 : it->second;
      if (n != 1) {
        out.holds = false;
        out.message = "a map into a sheaf with sizes";
        for (int sz : q.sizes) out.message += " " + std::to_string(sz);
        out.message += " has " + std::to_string(n) + " factorizations";
        return false;
      }
      return true;
    });
    return out.holds;
  });
  return out;
}

PullbackPresheaf prop33_pullback_presheaf(const Functor& p2, int d2, int u2, int f2) {
  const Category& dd = *p2.source;
  const Category& cc = *p2.target;
  if (cc.src(u2) != p2.obj(d2) || cc.tgt(u2) != cc.tgt(f2))
    throw CategoryError("pullback presheaf: u' and f' do not form a cospan at p'(d')");
  PullbackPresheaf out;
  const int n = dd.num_objects();
  out.elements.resize(n);
  std::vector<int> sizes(n);
  std::vector<std::vector<std::string>> labels(n);
  for (int e = 0; e < n; ++e) {
    for (int g : dd.hom(e, d2))
      for (int w : cc.hom(p2.obj(e), cc.src(f2)))
        if (cc.compose(f2, w) == cc.compose(u2, p2.arr(g))) {
          out.elements[e].emplace_back(g, w);
          labels[e].push_back("(" + dd.arrow_name(g) + "," + cc.arrow_name(w) + ")");
        }
    sizes[e] = static_cast<int>(out.elements[e].size());
  }
  std::vector<std::vector<int>> actions(dd.num_arrows());
  for (int h = 0; h < dd.num_arrows(); ++h) {
    const auto& from = out.elements[dd.tgt(h)];
    const auto& to = out.elements[dd.src(h)];
    for (auto [g, w] : from) {
      std::pair<int, int> image{dd.compose(g, h), cc.compose(w, p2.arr(h))};
      actions[h].push_back(static_cast<int>(std::find(to.begin(), to.end(), image) - to.begin()));
    }
  }
  out.presheaf = validate_presheaf(p2.source, std::move(sizes), std::move(actions));
  out.presheaf.labels = std::move(labels);
  return out;
}

std::string describe(const Presheaf& p) {
  const Category& c = *p.base;
  std::vector<std::string> lines;
  for (int o = 0; o < c.num_objects(); ++o) {
    std::string l = "P(" + c.object_name(o) + ") = {";
    for (int x = 0; x < p.size(o); ++x) l += (x ? ", " : "") + p.label(o, x);
    lines.push_back(l + "}");
  }
  std::sort(lines.begin(), lines.end());
  std::vector<std::string> acts;
  for (int f = 0; f < c.num_arrows(); ++f) {
    if (c.is_identity(f)) continue;
    std::string l = "P(" + c.arrow_name(f) + "):";
    for (int x = 0; x < p.size(c.tgt(f)); ++x)
      l += " " + p.label(c.tgt(f), x) + "->" + p.label(c.src(f), p.act(f, x));
    acts.push_back(l);
  }
  std::sort(acts.begin(), acts.end());
  std::ostringstream os;
  for (const auto& l : lines) os << l << '\n';
  for (const auto& l : acts) os << l << '\n';
  return os.str();
}

}  // namespace relsite
