#include "relsite/topology.hpp"

#include <algorithm>
#include <sstream>

namespace relsite {

namespace {

Topology::Flags empty_flags(const Category& c) {
  const auto& lat = c.lattice();
  Topology::Flags flags(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) flags[o].assign(lat.count(o), 0);
  return flags;
}

// Least fixed point of maximality, upward closure, stability and
// transitivity above `flags`. Upward closure and stability run as a
// worklist; transitivity is re-scanned until nothing new appears.
void close_in_place(const Category& c, Topology::Flags& flags) {
  const auto& lat = c.lattice();
  const int n = c.num_objects();
  std::vector<std::pair<int, int>> work;
  auto mark = [&](int o, int i) {
    if (!flags[o][i]) {
      flags[o][i] = 1;
      work.emplace_back(o, i);
    }
  };
  for (int o = 0; o < n; ++o) {
    flags[o][lat.maximal(o)] = 0;
    for (int i = 0; i < lat.count(o); ++i)
      if (flags[o][i]) work.emplace_back(o, i);
    mark(o, lat.maximal(o));
  }
  for (;;) {
    while (!work.empty()) {
      auto [o, i] = work.back();
      work.pop_back();
      for (int f : c.arrows_into(o)) {
        mark(o, lat.join(f, i));
        mark(c.src(f), lat.pullback(f, i));
      }
    }
    for (int o = 0; o < n; ++o)
      for (int i = 0; i < lat.count(o); ++i) {
        if (flags[o][i]) continue;
        int local = lat.empty(o);
        for (int f : c.arrows_into(o))
          if (flags[c.src(f)][lat.pullback(f, i)]) local = lat.join(f, local);
        if (flags[o][local]) mark(o, i);
      }
    if (work.empty()) return;
  }
}

}  // namespace

Topology::Topology(CategoryPtr base) : base_(std::move(base)), flags_(empty_flags(*base_)) {}

Topology::Topology(CategoryPtr base, Flags flags) : base_(std::move(base)), flags_(std::move(flags)) {
  const auto& lat = base_->lattice();
  if (static_cast<int>(flags_.size()) != base_->num_objects()) throw CategoryError("covers-map is not total");
  for (int o = 0; o < base_->num_objects(); ++o)
    if (static_cast<int>(flags_[o].size()) != lat.count(o)) throw CategoryError("covers-map has wrong shape");
}

Topology Topology::trivial(const CategoryPtr& base) {
  Topology t(base);
  for (int o = 0; o < base->num_objects(); ++o) t.set(o, t.lattice().maximal(o));
  return t;
}

Topology Topology::degenerate(const CategoryPtr& base) {
  Topology t(base);
  for (auto& row : t.flags_) std::fill(row.begin(), row.end(), 1);
  return t;
}

bool Topology::covers(int obj, const ArrowSet& sieve) const {
  int i = lattice().index_of(obj, sieve);
  return i >= 0 && covers(obj, i);
}

std::vector<int> Topology::covering(int obj) const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(flags_[obj].size()); ++i)
    if (flags_[obj][i]) out.push_back(i);
  return out;
}

std::vector<ArrowSet> Topology::minimal_covers(int obj) const {
  const auto& lat = lattice();
  auto cov = covering(obj);
  std::vector<ArrowSet> out;
  for (int i : cov) {
    const ArrowSet& s = lat.sieve(obj, i);
    bool minimal = true;
    for (int j : cov)
      if (j != i && lat.sieve(obj, j).subset_of(s)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(s);
  }
  return out;
}

int Topology::cover_count() const {
  int n = 0;
  for (const auto& row : flags_) n += static_cast<int>(std::count(row.begin(), row.end(), 1));
  return n;
}

Topology saturate(const Coverage& coverage) {
  const Category& c = *coverage.base;
  auto flags = empty_flags(c);
  const auto& lat = c.lattice();
  for (int o = 0; o < c.num_objects(); ++o)
    for (const auto& family : coverage.families[o]) {
      ArrowSet fam;
      for (int f : family) {
        if (c.tgt(f) != o) throw CategoryError("coverage family member " + c.arrow_name(f) + " misses its object");
        fam.insert(f);
      }
      flags[o][lat.index_of(o, generate(c, fam))] = 1;
    }
  close_in_place(c, flags);
  return Topology(coverage.base, std::move(flags));
}

Topology saturate(const Topology& seed) {
  auto flags = seed.flags();
  close_in_place(*seed.base(), flags);
  return Topology(seed.base(), std::move(flags));
}

namespace {

std::string sieve_text(const Category& c, const ArrowSet& s) {
  std::vector<std::string> names;
  s.for_each([&](int a) { names.push_back(c.arrow_name(a)); });
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out + "}";
}

}  // namespace

TopologyCheck is_topology(const Topology& t) {
  const Category& c = *t.base();
  const auto& lat = t.lattice();
  TopologyCheck out;
  auto fail = [&](std::string axiom, int o, const ArrowSet& s, std::string msg) {
    out.holds = false;
    out.axiom = std::move(axiom);
    out.object = o;
    out.sieve = s;
    out.message = std::move(msg);
    return out;
  };
  for (int o = 0; o < c.num_objects(); ++o)
    if (!t.covers(o, lat.maximal(o)))
      return fail("maximality", o, lat.sieve(o, lat.maximal(o)), "maximality at " + c.object_name(o));
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i : t.covering(o))
      for (int f : c.arrows_into(o))
        if (!t.covers(c.src(f), lat.pullback(f, i))) {
          fail("stability", o, lat.sieve(o, i),
               "stability: pullback of " + sieve_text(c, lat.sieve(o, i)) + " along " + c.arrow_name(f));
          out.arrow = f;
          return out;
        }
  // Upward closure is implied by transitivity; a failure is witnessed by the
  // bigger sieve together with the covering one it contains.
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i : t.covering(o)) {
      const ArrowSet& s = lat.sieve(o, i);
      for (int f : c.arrows_into(o)) {
        if (s.contains(f)) continue;
        int j = lat.join(f, i);
        if (!t.covers(o, j)) {
          fail("transitivity", o, lat.sieve(o, j),
               "transitivity at " + c.object_name(o) + ": " + sieve_text(c, lat.sieve(o, j)) + " contains cover " +
                   sieve_text(c, s));
          out.witness = s;
          return out;
        }
      }
    }
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i = 0; i < lat.count(o); ++i) {
      if (t.covers(o, i)) continue;
      ArrowSet local;
      for (int f : c.arrows_into(o))
        if (t.covers(c.src(f), lat.pullback(f, i))) local.insert(f);
      int k = lat.index_of(o, local);
      if (k >= 0 && t.covers(o, k)) {
        fail("transitivity", o, lat.sieve(o, i),
             "transitivity at " + c.object_name(o) + ": " + sieve_text(c, lat.sieve(o, i)) +
                 " is locally covering along " + sieve_text(c, local));
        out.witness = local;
        return out;
      }
    }
  return out;
}

bool replay_failure(const Topology& t, const TopologyCheck& check) {
  if (check.holds) return false;
  const Category& c = *t.base();
  const auto& lat = t.lattice();
  if (check.axiom == "maximality") return !t.covers(check.object, check.sieve);
  if (check.axiom == "stability")
    return t.covers(check.object, check.sieve) &&
           !t.covers(c.src(check.arrow), pullback(c, check.arrow, check.sieve));
  if (check.axiom == "transitivity") {
    if (t.covers(check.object, check.sieve) || !t.covers(check.object, check.witness)) return false;
    bool all = true;
    check.witness.for_each([&](int f) {
      if (!t.covers(c.src(f), pullback(c, f, check.sieve))) all = false;
    });
    (void)lat;
    return all;
  }
  return false;
}

bool topology_leq(const Topology& j1, const Topology& j2) {
  if (!same_category(j1.base(), j2.base())) throw CategoryError("topology_leq: different base categories");
  const auto& a = j1.flags();
  const auto& b = j2.flags();
  for (std::size_t o = 0; o < a.size(); ++o)
    for (std::size_t i = 0; i < a[o].size(); ++i)
      if (a[o][i] && !b[o][i]) return false;
  return true;
}

Topology image_candidate(const Functor& f, const Topology& k) {
  if (!same_category(f.target, k.base())) throw CategoryError("induced topology: K lives on another category");
  const Category& s = *f.source;
  const Category& t = *f.target;
  Topology out(f.source);
  const auto& lat = s.lattice();
  for (int o = 0; o < s.num_objects(); ++o)
    for (int i = 0; i < lat.count(o); ++i)
      if (k.covers(f.obj(o), generate(t, image(f, lat.sieve(o, i))))) out.set(o, i);
  return out;
}

Topology induced_image_topology(const Functor& f, const Topology& k) {
  Topology candidate = image_candidate(f, k);
  auto check = is_topology(candidate);
  if (!check.holds) throw NotATopology(std::move(check), std::move(candidate));
  return candidate;
}

bool for_each_topology(const CategoryPtr& cp, std::size_t cap, const std::function<bool(const Topology&)>& visit) {
  const Category& c = *cp;
  const auto& lat = c.lattice();
  std::vector<std::pair<int, int>> ground;
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i = 0; i < lat.count(o); ++i)
      if (i != lat.maximal(o)) ground.emplace_back(o, i);
  const int n = static_cast<int>(ground.size());
  auto closure = [&](const std::vector<char>& set) {
    auto flags = empty_flags(c);
    for (int g = 0; g < n; ++g)
      if (set[g]) flags[ground[g].first][ground[g].second] = 1;
    close_in_place(c, flags);
    std::vector<char> out(n);
    for (int g = 0; g < n; ++g) out[g] = flags[ground[g].first][ground[g].second];
    return out;
  };
  auto to_topology = [&](const std::vector<char>& set) {
    auto flags = empty_flags(c);
    for (int o = 0; o < c.num_objects(); ++o) flags[o][lat.maximal(o)] = 1;
    for (int g = 0; g < n; ++g)
      if (set[g]) flags[ground[g].first][ground[g].second] = 1;
    return Topology(cp, std::move(flags));
  };
  std::vector<char> current = closure(std::vector<char>(n, 0));
  std::size_t emitted = 0;
  for (;;) {
    if (emitted == cap) return false;
    ++emitted;
    if (!visit(to_topology(current))) return true;
    bool advanced = false;
    std::vector<char> a = current;
    for (int i = n - 1; i >= 0; --i) {
      if (a[i]) {
        a[i] = 0;
        continue;
      }
      a[i] = 1;
      auto b = closure(a);
      a[i] = 0;
      bool ok = true;
      for (int j = 0; j < i; ++j)
        if (b[j] && !a[j]) {
          ok = false;
          break;
        }
      if (ok) {
        current = std::move(b);
        advanced = true;
        break;
      }
    }
    if (!advanced) return true;
  }
}

TopologyEnumeration enumerate_topologies(const CategoryPtr& c, std::size_t cap) {
  TopologyEnumeration out;
  out.truncated = !for_each_topology(c, cap, [&](const Topology& t) {
    out.topologies.push_back(t);
    return true;
  });
  return out;
}

std::string describe(const Topology& t) {
  const Category& c = *t.base();
  const auto& lat = t.lattice();
  std::vector<int> objects(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) objects[o] = o;
  std::sort(objects.begin(), objects.end(), [&](int a, int b) { return c.object_name(a) < c.object_name(b); });
  std::ostringstream os;
  for (int o : objects) {
    std::vector<std::string> lines;
    for (int i : t.covering(o)) lines.push_back(sieve_text(c, lat.sieve(o, i)));
    std::sort(lines.begin(), lines.end());
    os << "covers(" << c.object_name(o) << "):";
    for (const auto& l : lines) os << ' ' << l;
    os << '\n';
  }
  return os.str();
}

}  // namespace relsite
