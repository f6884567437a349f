#include "relsite/site_verify.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace relsite {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<int> parent_;
};

void check_endpoints(const SiteFunctor& s) {
  if (!same_category(s.source.base(), s.functor.source) || !same_category(s.target.base(), s.functor.target))
    throw CategoryError("site functor: topologies live on the wrong categories");
}

struct Recorder {
  Verdict verdict;
  bool fail(Witness w) {
    verdict.holds = false;
    verdict.witness = std::move(w);
    return false;
  }
  void pass(const std::function<Witness()>& make) {
    if (verdict.trace.size() < kTraceLimit) verdict.trace.push_back(make());
  }
};

ArrowSet preimage(const Functor& f, int c, const ArrowSet& sieve) {
  ArrowSet out;
  for (int g : f.source->arrows_into(c))
    if (sieve.contains(f.arr(g))) out.insert(g);
  return out;
}

ArrowSet image_sieve(const Functor& f, const ArrowSet& sieve) { return generate(*f.target, image(f, sieve)); }

// Components of (e ↓ Aπ_S) for all e at once: the object (y, s_i) with
// y: e -> A(src s_i) has index y * |S| + i.
struct SieveComma {
  std::vector<int> members;
  std::vector<int> pos;
  UnionFind uf;
  int m;

  SieveComma(const Functor& a, const ArrowSet& sieve)
      : members(sieve.elements()),
        pos(a.source->num_arrows(), -1),
        uf(static_cast<std::size_t>(a.target->num_arrows()) * std::max<std::size_t>(1, sieve.size())),
        m(static_cast<int>(members.size())) {
    const Category& c = *a.source;
    const Category& d = *a.target;
    for (int i = 0; i < m; ++i) pos[members[i]] = i;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int h : c.hom(c.src(members[i]), c.src(members[j]))) {
          if (c.compose(members[j], h) != members[i]) continue;
          const int ah = a.arr(h);
          for (int y : d.arrows_into(a.obj(c.src(members[i])))) uf.unite(y * m + i, d.compose(ah, y) * m + j);
        }
  }
  int label(int y, int s) { return uf.find(y * m + pos[s]); }
};

ArrowSet zigzag_sieve(const Functor& a, SieveComma& comma, int d, int a1, int f, int a2, int g) {
  const Category& dc = *a.target;
  ArrowSet r;
  for (int k : dc.arrows_into(d))
    if (comma.label(dc.compose(a1, k), f) == comma.label(dc.compose(a2, k), g)) r.insert(k);
  return r;
}

bool continuity_for_cover(const SiteFunctor& s, int c, const ArrowSet& sieve, Recorder& rec) {
  const Functor& a = s.functor;
  const Category& cc = *a.source;
  const Category& dc = *a.target;
  SieveComma comma(a, sieve);
  for (int d = 0; d < dc.num_objects(); ++d) {
    // objects of (d ↓ Aπ_S) grouped by the composite d -> A(c)
    std::map<int, std::vector<std::pair<int, int>>> reps;
    std::map<int, std::unordered_set<int>> seen;
    for (int f : comma.members)
      for (int y : dc.hom(d, a.obj(cc.src(f)))) {
        const int z = dc.compose(a.arr(f), y);
        if (seen[z].insert(comma.label(y, f)).second) reps[z].emplace_back(y, f);
      }
    for (const auto& [z, list] : reps)
      for (std::size_t i = 1; i < list.size(); ++i) {
        auto [a1, f] = list[0];
        auto [a2, g] = list[i];
        ArrowSet r = zigzag_sieve(a, comma, d, a1, f, a2, g);
        Witness w{"continuity", c, sieve, {d, a1, f, a2, g}, {}};
        if (!s.target.covers(d, r)) {
          w.detail = "squares through " + cc.arrow_name(f) + " and " + cc.arrow_name(g) + " at " + dc.object_name(d) +
                     " are not locally connected";
          return rec.fail(std::move(w));
        }
        rec.pass([&] { return w; });
      }
  }
  return true;
}

// --- covering-flatness ------------------------------------------------------

ArrowSet cone_sieve(const Functor& f, int d) {
  const Category& dc = *f.target;
  ArrowSet r;
  for (int k : dc.arrows_into(d))
    for (int c = 0; c < f.source->num_objects(); ++c)
      if (!dc.hom(dc.src(k), f.obj(c)).empty()) {
        r.insert(k);
        break;
      }
  return r;
}

std::int64_t span_key(const Category& dc, int c1, int x, int c2, int y) {
  const std::int64_t na = dc.num_arrows(), no = kMaxObjects;
  return ((static_cast<std::int64_t>(c1) * na + x) * no + c2) * na + y;
}

// (c1, F(g1)∘b, c2, F(g2)∘b) over all spans g1: c -> c1, g2: c -> c2 and b: e -> F(c)
std::unordered_set<std::int64_t> all_spans(const Functor& f) {
  const Category& cc = *f.source;
  const Category& dc = *f.target;
  std::unordered_set<std::int64_t> out;
  for (int c = 0; c < cc.num_objects(); ++c)
    for (int b : dc.arrows_into(f.obj(c)))
      for (int g1 : cc.arrows_out(c))
        for (int g2 : cc.arrows_out(c))
          out.insert(span_key(dc, cc.tgt(g1), dc.compose(f.arr(g1), b), cc.tgt(g2), dc.compose(f.arr(g2), b)));
  return out;
}

ArrowSet span_sieve(const Functor& f, const std::unordered_set<std::int64_t>& spans, int d, int c1, int a1, int c2,
                    int a2) {
  const Category& dc = *f.target;
  ArrowSet r;
  for (int k : dc.arrows_into(d))
    if (spans.count(span_key(dc, c1, dc.compose(a1, k), c2, dc.compose(a2, k)))) r.insert(k);
  return r;
}

ArrowSet equalized_arrows(const Functor& f, int g1, int g2) {
  const Category& cc = *f.source;
  const Category& dc = *f.target;
  ArrowSet out;
  for (int h : cc.arrows_into(cc.src(g1)))
    if (cc.compose(g1, h) == cc.compose(g2, h))
      for (int b : dc.arrows_into(f.obj(cc.src(h)))) out.insert(dc.compose(f.arr(h), b));
  return out;
}

ArrowSet equalizer_sieve(const Functor& f, const ArrowSet& equalized, int d, int a) {
  const Category& dc = *f.target;
  ArrowSet r;
  for (int k : dc.arrows_into(d))
    if (equalized.contains(dc.compose(a, k))) r.insert(k);
  return r;
}

// --- density ------------------------------------------------------------------

ArrowSet through_images(const Functor& f) {
  const Category& dc = *f.target;
  ArrowSet out;
  for (int c = 0; c < f.source->num_objects(); ++c)
    for (int m : dc.arrows_out(f.obj(c)))
      for (int b : dc.arrows_into(f.obj(c))) out.insert(dc.compose(m, b));
  return out;
}

ArrowSet fullness_sieve(const Functor& f, int c, int c1, int g) {
  const Category& cc = *f.source;
  const Category& dc = *f.target;
  ArrowSet r;
  for (int h : cc.arrows_into(c)) {
    const int target = dc.compose(g, f.arr(h));
    for (int m : cc.hom(cc.src(h), c1))
      if (f.arr(m) == target) {
        r.insert(h);
        break;
      }
  }
  return r;
}

ArrowSet faithfulness_sieve(const Category& cc, int f1, int f2) {
  ArrowSet r;
  for (int h : cc.arrows_into(cc.src(f1)))
    if (cc.compose(f1, h) == cc.compose(f2, h)) r.insert(h);
  return r;
}

}  // namespace

Verdict is_comorphism(const SiteFunctor& s) {
  check_endpoints(s);
  const Functor& f = s.functor;
  const auto& lat = s.target.lattice();
  Recorder rec;
  for (int c = 0; c < f.source->num_objects(); ++c)
    for (int idx : s.target.covering(f.obj(c))) {
      const ArrowSet& cover = lat.sieve(f.obj(c), idx);
      Witness w{"comorphism", c, cover, {}, {}};
      if (!s.source.covers(c, preimage(f, c, cover))) {
        w.detail = "a cover of " + f.target->object_name(f.obj(c)) + " has no covering lift at " +
                   f.source->object_name(c);
        rec.fail(std::move(w));
        return rec.verdict;
      }
      rec.pass([&] { return w; });
    }
  return rec.verdict;
}

Verdict is_cover_preserving(const SiteFunctor& s) {
  check_endpoints(s);
  const Functor& f = s.functor;
  const auto& lat = s.source.lattice();
  Recorder rec;
  for (int c = 0; c < f.source->num_objects(); ++c)
    for (int idx : s.source.covering(c)) {
      const ArrowSet& cover = lat.sieve(c, idx);
      Witness w{"cover-preserving", c, cover, {}, {}};
      if (!s.target.covers(f.obj(c), image_sieve(f, cover))) {
        w.detail = "image of a cover of " + f.source->object_name(c) + " does not cover";
        rec.fail(std::move(w));
        return rec.verdict;
      }
      rec.pass([&] { return w; });
    }
  return rec.verdict;
}

Verdict is_continuous(const SiteFunctor& s) {
  Verdict v = is_cover_preserving(s);
  if (!v.holds) return v;
  Recorder rec;
  rec.verdict.trace = std::move(v.trace);
  const auto& lat = s.source.lattice();
  for (int c = 0; c < s.functor.source->num_objects(); ++c)
    for (int idx : s.source.covering(c))
      if (!continuity_for_cover(s, c, lat.sieve(c, idx), rec)) return rec.verdict;
  return rec.verdict;
}

Verdict is_covering_flat(const SiteFunctor& s) {
  check_endpoints(s);
  const Functor& f = s.functor;
  const Category& cc = *f.source;
  const Category& dc = *f.target;
  Recorder rec;
  for (int d = 0; d < dc.num_objects(); ++d) {
    Witness w{"flat-cone", d, {}, {}, {}};
    if (!s.target.covers(d, cone_sieve(f, d))) {
      w.detail = dc.object_name(d) + " is not locally reached by any image object";
      rec.fail(std::move(w));
      return rec.verdict;
    }
    rec.pass([&] { return w; });
  }
  const auto spans = all_spans(f);
  for (int d = 0; d < dc.num_objects(); ++d)
    for (int c1 = 0; c1 < cc.num_objects(); ++c1)
      for (int c2 = 0; c2 < cc.num_objects(); ++c2)
        for (int a1 : dc.hom(d, f.obj(c1)))
          for (int a2 : dc.hom(d, f.obj(c2))) {
            Witness w{"flat-span", d, {}, {c1, a1, c2, a2}, {}};
            if (!s.target.covers(d, span_sieve(f, spans, d, c1, a1, c2, a2))) {
              w.detail = "the pair (" + dc.arrow_name(a1) + ", " + dc.arrow_name(a2) + ") is not locally spanned";
              rec.fail(std::move(w));
              return rec.verdict;
            }
            rec.pass([&] { return w; });
          }
  for (int g1 = 0; g1 < cc.num_arrows(); ++g1)
    for (int g2 : cc.hom(cc.src(g1), cc.tgt(g1))) {
      if (g2 <= g1) continue;
      const ArrowSet eq = equalized_arrows(f, g1, g2);
      for (int a : dc.arrows_into(f.obj(cc.src(g1)))) {
        if (dc.compose(f.arr(g1), a) != dc.compose(f.arr(g2), a)) continue;
        const int d = dc.src(a);
        Witness w{"flat-equalizer", d, {}, {g1, g2, a}, {}};
        if (!s.target.covers(d, equalizer_sieve(f, eq, d, a))) {
          w.detail = "(" + cc.arrow_name(g1) + ", " + cc.arrow_name(g2) + ") is not locally equalized along " +
                     dc.arrow_name(a);
          rec.fail(std::move(w));
          return rec.verdict;
        }
        rec.pass([&] { return w; });
      }
    }
  return rec.verdict;
}

Verdict is_morphism_of_sites(const SiteFunctor& s) {
  Verdict cover = is_cover_preserving(s);
  if (!cover.holds) return cover;
  Verdict flat = is_covering_flat(s);
  for (auto& w : cover.trace)
    if (flat.trace.size() < 2 * kTraceLimit) flat.trace.push_back(std::move(w));
  return flat;
}

Verdict is_dense_morphism(const SiteFunctor& s) {
  Verdict v = is_morphism_of_sites(s);
  if (!v.holds) return v;
  const Functor& f = s.functor;
  const Category& cc = *f.source;
  const Category& dc = *f.target;
  Recorder rec;
  rec.verdict.trace = std::move(v.trace);
  const auto& lat = s.source.lattice();
  for (int c = 0; c < cc.num_objects(); ++c)
    for (int idx = 0; idx < lat.count(c); ++idx) {
      if (s.source.covers(c, idx)) continue;
      const ArrowSet& sieve = lat.sieve(c, idx);
      if (s.target.covers(f.obj(c), image_sieve(f, sieve))) {
        rec.fail(Witness{"cover-reflection", c, sieve, {}, "a non-cover of " + cc.object_name(c) + " maps to a cover"});
        return rec.verdict;
      }
    }
  const ArrowSet through = through_images(f);
  for (int d = 0; d < dc.num_objects(); ++d) {
    ArrowSet r;
    for (int k : dc.arrows_into(d))
      if (through.contains(k)) r.insert(k);
    Witness w{"image-cover", d, {}, {}, {}};
    if (!s.target.covers(d, r)) {
      w.detail = dc.object_name(d) + " is not covered by arrows from image objects";
      rec.fail(std::move(w));
      return rec.verdict;
    }
    rec.pass([&] { return w; });
  }
  for (int c = 0; c < cc.num_objects(); ++c)
    for (int c1 = 0; c1 < cc.num_objects(); ++c1)
      for (int g : dc.hom(f.obj(c), f.obj(c1))) {
        Witness w{"local-fullness", c, {}, {c1, g}, {}};
        if (!s.source.covers(c, fullness_sieve(f, c, c1, g))) {
          w.detail = dc.arrow_name(g) + " is not locally in the image";
          rec.fail(std::move(w));
          return rec.verdict;
        }
        rec.pass([&] { return w; });
      }
  for (int f1 = 0; f1 < cc.num_arrows(); ++f1)
    for (int f2 : cc.hom(cc.src(f1), cc.tgt(f1))) {
      if (f2 <= f1 || f.arr(f1) != f.arr(f2)) continue;
      Witness w{"local-faithfulness", cc.src(f1), {}, {f1, f2}, {}};
      if (!s.source.covers(cc.src(f1), faithfulness_sieve(cc, f1, f2))) {
        w.detail = cc.arrow_name(f1) + " and " + cc.arrow_name(f2) + " are identified but not locally equal";
        rec.fail(std::move(w));
        return rec.verdict;
      }
      rec.pass([&] { return w; });
    }
  return rec.verdict;
}

bool evaluate(const SiteFunctor& s, const Witness& w) {
  const Functor& f = s.functor;
  const auto& cond = w.condition;
  if (cond == "comorphism") return s.source.covers(w.object, preimage(f, w.object, w.sieve));
  if (cond == "cover-preserving") return s.target.covers(f.obj(w.object), image_sieve(f, w.sieve));
  if (cond == "continuity") {
    SieveComma comma(f, w.sieve);
    const auto& a = w.arrows;
    return s.target.covers(a[0], zigzag_sieve(f, comma, a[0], a[1], a[2], a[3], a[4]));
  }
  if (cond == "flat-cone") return s.target.covers(w.object, cone_sieve(f, w.object));
  if (cond == "flat-span") {
    const auto& a = w.arrows;
    return s.target.covers(w.object, span_sieve(f, all_spans(f), w.object, a[0], a[1], a[2], a[3]));
  }
  if (cond == "flat-equalizer") {
    const auto& a = w.arrows;
    return s.target.covers(w.object, equalizer_sieve(f, equalized_arrows(f, a[0], a[1]), w.object, a[2]));
  }
  if (cond == "cover-reflection")
    return s.source.covers(w.object, w.sieve) || !s.target.covers(f.obj(w.object), image_sieve(f, w.sieve));
  if (cond == "image-cover") {
    const ArrowSet through = through_images(f);
    ArrowSet r;
    for (int k : f.target->arrows_into(w.object))
      if (through.contains(k)) r.insert(k);
    return s.target.covers(w.object, r);
  }
  if (cond == "local-fullness") return s.source.covers(w.object, fullness_sieve(f, w.object, w.arrows[0], w.arrows[1]));
  if (cond == "local-faithfulness")
    return s.source.covers(w.object, faithfulness_sieve(*f.source, w.arrows[0], w.arrows[1]));
  throw CategoryError("unknown condition " + cond);
}

// --- lifting squares ------------------------------------------------------------

namespace {

void check_square(const LiftingSquare& sq) {
  const Functor top = compose(sq.p, sq.a);
  const Functor bottom = compose(sq.b, sq.p2);
  if (!same_category(sq.a.target, sq.p.source) || !same_category(sq.a.source, sq.p2.source) ||
      !same_category(sq.b.source, sq.p2.target) || !same_category(sq.b.target, sq.p.target))
    throw CategoryError("malformed square: functors do not compose");
  if (sq.phi.source.objects != top.objects || sq.phi.source.arrows != top.arrows ||
      sq.phi.target.objects != bottom.objects || sq.phi.target.arrows != bottom.arrows)
    throw CategoryError("malformed square: 2-cell is not pA => Bp'");
  if (!same_category(sq.k.base(), sq.p.source)) throw CategoryError("malformed square: topology on the wrong category");
}

// Triplets (x: e -> A(d̄), element of P(d̄)) for one choice of (f', d', u').
struct TripletContext {
  PullbackPresheaf pb;
  std::vector<int> offset;  // d̄ -> first element index
  std::vector<int> owner;   // element index -> d̄
  int total = 0;
  UnionFind uf;

  TripletContext(const LiftingSquare& sq, int f2, int d2, int u2)
      : pb(prop33_pullback_presheaf(sq.p2, d2, u2, f2)), uf(1) {
    const Category& dd2 = *sq.a.source;
    const Category& dd = *sq.a.target;
    for (int e = 0; e < dd2.num_objects(); ++e) {
      offset.push_back(total);
      total += pb.presheaf.size(e);
      for (int i = 0; i < pb.presheaf.size(e); ++i) owner.push_back(e);
    }
    uf = UnionFind(static_cast<std::size_t>(dd.num_arrows()) * std::max(1, total));
    for (int h = 0; h < dd2.num_arrows(); ++h) {
      const int ah = sq.a.arr(h);
      for (int el2 = 0; el2 < pb.presheaf.size(dd2.tgt(h)); ++el2) {
        const int el1 = pb.presheaf.act(h, el2);
        for (int x : dd.arrows_into(sq.a.obj(dd2.src(h))))
          uf.unite(id(x, offset[dd2.src(h)] + el1), id(dd.compose(ah, x), offset[dd2.tgt(h)] + el2));
      }
    }
  }
  int id(int x, int element) const { return x * total + element; }
  int label(int x, int element) { return uf.find(id(x, element)); }
  std::pair<int, int> element(int index) const {
    const int e = owner[index];
    return pb.elements[e][index - offset[e]];
  }
  // (B(ū)∘φ∘p(x), A(ḡ)∘x)
  std::pair<int, int> keys(const LiftingSquare& sq, int x, int index) const {
    const Category& cc = *sq.p.target;
    const Category& dd = *sq.a.target;
    const int dbar = owner[index];
    auto [g, u] = element(index);
    const int k1 = cc.compose(sq.b.arr(u), cc.compose(sq.phi.at(dbar), sq.p.arr(x)));
    const int k2 = dd.compose(sq.a.arr(g), x);
    return {k1, k2};
  }
};

std::int64_t pair_key(const Category& dd, int k1, int k2) {
  return static_cast<std::int64_t>(k1) * dd.num_arrows() + k2;
}

ArrowSet lift_sieve(const LiftingSquare& sq, const TripletContext& t, const std::unordered_set<std::int64_t>& keys, int d,
                    int u2, int g) {
  const Category& dd = *sq.a.target;
  const Category& cc = *sq.p.target;
  ArrowSet r;
  for (int k : dd.arrows_into(d))
    if (keys.count(pair_key(dd, cc.compose(u2, sq.p.arr(k)), dd.compose(g, k)))) r.insert(k);
  (void)t;
  return r;
}

std::unordered_set<std::int64_t> triplet_keys(const LiftingSquare& sq, const TripletContext& t) {
  const Category& dd = *sq.a.target;
  std::unordered_set<std::int64_t> out;
  for (int index = 0; index < t.total; ++index)
    for (int x : dd.arrows_into(sq.a.obj(t.owner[index]))) {
      auto [k1, k2] = t.keys(sq, x, index);
      out.insert(pair_key(dd, k1, k2));
    }
  return out;
}

ArrowSet connect_sieve(const LiftingSquare& sq, TripletContext& t, int d, int x1, int e1, int x2, int e2) {
  const Category& dd = *sq.a.target;
  ArrowSet r;
  for (int k : dd.arrows_into(d))
    if (t.label(dd.compose(x1, k), e1) == t.label(dd.compose(x2, k), e2)) r.insert(k);
  return r;
}

}  // namespace

Verdict check_prop33_conditions(const LiftingSquare& sq) {
  check_square(sq);
  const Category& cc2 = *sq.p2.target;  // C'
  const Category& dd2 = *sq.a.source;   // D'
  const Category& dd = *sq.a.target;    // D
  const Category& cc = *sq.p.target;    // C
  Recorder rec;
  for (int f2 = 0; f2 < cc2.num_arrows(); ++f2)
    for (int d2 = 0; d2 < dd2.num_objects(); ++d2)
      for (int u2 : cc2.hom(sq.p2.obj(d2), cc2.tgt(f2))) {
        TripletContext t(sq, f2, d2, u2);
        const auto keys = triplet_keys(sq, t);
        const int target_val = cc.compose(sq.b.arr(u2), sq.phi.at(d2));  // B(u')∘φ_{d'}
        for (int d = 0; d < dd.num_objects(); ++d) {
          for (int w : cc.hom(sq.p.obj(d), sq.b.obj(cc2.src(f2))))
            for (int g : dd.hom(d, sq.a.obj(d2))) {
              if (cc.compose(sq.b.arr(f2), w) != cc.compose(target_val, sq.p.arr(g))) continue;
              Witness wit{"prop33-lift", d, {}, {f2, d2, u2, w, g}, {}};
              if (!sq.k.covers(d, lift_sieve(sq, t, keys, d, w, g))) {
                wit.detail = "no covering family of triplets at " + dd.object_name(d) + " for f' = " +
                             cc2.arrow_name(f2) + ", d' = " + dd2.object_name(d2) + ", u' = " + cc2.arrow_name(u2);
                rec.fail(std::move(wit));
                return rec.verdict;
              }
              rec.pass([&] { return wit; });
            }
          std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> groups;
          std::map<std::pair<int, int>, std::unordered_set<int>> seen;
          for (int index = 0; index < t.total; ++index)
            for (int x : dd.hom(d, sq.a.obj(t.owner[index]))) {
              auto key = t.keys(sq, x, index);
              if (seen[key].insert(t.label(x, index)).second) groups[key].emplace_back(x, index);
            }
          for (const auto& [key, list] : groups)
            for (std::size_t i = 1; i < list.size(); ++i) {
              auto [x1, e1] = list[0];
              auto [x2, e2] = list[i];
              Witness wit{"prop33-connect", d, {}, {f2, d2, u2, x1, e1, x2, e2}, {}};
              if (!sq.k.covers(d, connect_sieve(sq, t, d, x1, e1, x2, e2))) {
                wit.detail = "two triplets at " + dd.object_name(d) + " are not locally connected for f' = " +
                             cc2.arrow_name(f2) + ", d' = " + dd2.object_name(d2) + ", u' = " + cc2.arrow_name(u2);
                rec.fail(std::move(wit));
                return rec.verdict;
              }
              rec.pass([&] { return wit; });
            }
        }
      }
  return rec.verdict;
}

bool evaluate(const LiftingSquare& sq, const Witness& w) {
  check_square(sq);
  const auto& a = w.arrows;
  TripletContext t(sq, a[0], a[1], a[2]);
  if (w.condition == "prop33-lift") return sq.k.covers(w.object, lift_sieve(sq, t, triplet_keys(sq, t), w.object, a[3], a[4]));
  if (w.condition == "prop33-connect") return sq.k.covers(w.object, connect_sieve(sq, t, w.object, a[3], a[4], a[5], a[6]));
  throw CategoryError("unknown condition " + w.condition);
}

std::string describe(const Verdict& v, const SiteFunctor* context) {
  std::ostringstream os;
  os << (v.holds ? "true" : "false") << '\n';
  auto line = [&](const char* tag, const Witness& w) {
    os << tag << ' ' << w.condition;
    if (context && w.object >= 0) {
      const bool on_target = w.condition.rfind("flat", 0) == 0 || w.condition == "image-cover";
      const Category& c = on_target ? *context->functor.target : *context->functor.source;
      os << " at " << c.object_name(w.object);
    } else if (w.object >= 0) {
      os << " at #" << w.object;
    }
    if (!w.detail.empty()) os << ": " << w.detail;
    os << '\n';
  };
  if (v.witness) line("witness", *v.witness);
  for (const auto& w : v.trace) line("used", w);
  return os.str();
}

}  // namespace relsite
