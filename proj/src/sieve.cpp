#include "relsite/sieve.hpp"

#include <algorithm>
#include <deque>

namespace relsite {

const SieveLattice& Category::lattice() const {
  std::call_once(lattice_once_, [this] { lattice_ = std::make_shared<SieveLattice>(*this); });
  return *lattice_;
}

ArrowSet generate(const Category& c, const ArrowSet& family) {
  ArrowSet out;
  family.for_each([&](int f) {
    for (int g : c.arrows_into(c.src(f))) out.insert(c.compose(f, g));
  });
  return out;
}

Sieve generate_sieve(const CategoryPtr& c, int apex, const std::vector<int>& family) {
  ArrowSet fam;
  for (int f : family) {
    if (c->tgt(f) != apex) throw CategoryError("generate_sieve: mixed targets (" + c->arrow_name(f) + ")");
    fam.insert(f);
  }
  return Sieve{c, apex, generate(*c, fam)};
}

Sieve maximal_sieve(const CategoryPtr& c, int apex) {
  ArrowSet all;
  for (int f : c->arrows_into(apex)) all.insert(f);
  return Sieve{c, apex, all};
}

bool is_sieve(const Category& c, int apex, const ArrowSet& arrows) {
  bool ok = true;
  arrows.for_each([&](int f) {
    if (!ok) return;
    if (c.tgt(f) != apex) {
      ok = false;
      return;
    }
    for (int g : c.arrows_into(c.src(f)))
      if (!arrows.contains(c.compose(f, g))) {
        ok = false;
        return;
      }
  });
  return ok;
}

ArrowSet pullback(const Category& c, int f, const ArrowSet& sieve) {
  ArrowSet out;
  for (int g : c.arrows_into(c.src(f)))
    if (sieve.contains(c.compose(f, g))) out.insert(g);
  return out;
}

Sieve pullback_sieve(int f, const Sieve& s) {
  if (s.base->tgt(f) != s.apex) throw CategoryError("pullback_sieve: arrow does not target the apex");
  return Sieve{s.base, s.base->src(f), pullback(*s.base, f, s.arrows)};
}

ElementsCategory elements_of_sieve(const Sieve& s) { return elements_of_arrows(s.base, s.apex, s.arrows); }

SieveLattice::SieveLattice(const Category& c) {
  const int n = c.num_objects();
  sieves_.resize(n);
  index_.resize(n);
  maximal_.resize(n);
  empty_.resize(n);
  principal_.resize(c.num_arrows());
  for (int f = 0; f < c.num_arrows(); ++f) {
    ArrowSet one;
    one.insert(f);
    principal_[f] = generate(c, one);
  }
  for (int o = 0; o < n; ++o) {
    std::vector<ArrowSet> found;
    std::unordered_map<ArrowSet, int, ArrowSetHash> seen;
    std::deque<ArrowSet> queue{ArrowSet{}};
    seen.emplace(ArrowSet{}, 0);
    while (!queue.empty()) {
      ArrowSet s = queue.front();
      queue.pop_front();
      found.push_back(s);
      for (int f : c.arrows_into(o)) {
        if (s.contains(f)) continue;
        ArrowSet t = s | principal_[f];
        if (seen.emplace(t, 0).second) {
          if (total_ + static_cast<int>(seen.size()) > kMaxSieves)
            throw CapError("sieve lattice exceeds " + std::to_string(kMaxSieves) + " sieves");
          queue.push_back(t);
        }
      }
    }
    std::sort(found.begin(), found.end(), [](const ArrowSet& a, const ArrowSet& b) {
      int sa = a.size(), sb = b.size();
      return sa != sb ? sa < sb : a < b;
    });
    for (int i = 0; i < static_cast<int>(found.size()); ++i) index_[o].emplace(found[i], i);
    sieves_[o] = std::move(found);
    total_ += count(o);
    empty_[o] = 0;
    maximal_[o] = count(o) - 1;
  }
  pullbacks_.resize(c.num_arrows());
  for (int f = 0; f < c.num_arrows(); ++f) {
    const int t = c.tgt(f), s = c.src(f);
    auto& table = pullbacks_[f];
    table.resize(count(t));
    for (int i = 0; i < count(t); ++i) table[i] = index_of(s, relsite::pullback(c, f, sieves_[t][i]));
  }
  joins_.resize(c.num_arrows());
  for (int f = 0; f < c.num_arrows(); ++f) {
    const int t = c.tgt(f);
    auto& table = joins_[f];
    table.resize(count(t));
    for (int i = 0; i < count(t); ++i) table[i] = index_of(t, sieves_[t][i] | principal_[f]);
  }
}

int SieveLattice::index_of(int obj, const ArrowSet& arrows) const {
  auto it = index_[obj].find(arrows);
  return it == index_[obj].end() ? -1 : it->second;
}

}  // namespace relsite
