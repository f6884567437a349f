#include "relsite/bundle.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "relsite/site_verify.hpp"

namespace relsite {

using nlohmann::json;

namespace {

std::string escape(const std::string& token) {
  std::string out;
  for (char ch : token) {
    if (ch == '~')
      out += "~0";
    else if (ch == '/')
      out += "~1";
    else
      out += ch;
  }
  return out;
}

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + escape(key); }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& field(const json& obj, const std::string& key, const std::string& ptr) {
  if (!obj.is_object()) throw BundleError(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw BundleError(ptr, "missing key \"" + key + "\"");
  return *it;
}

std::string text(const json& v, const std::string& ptr) {
  if (!v.is_string()) throw BundleError(ptr, "expected a string");
  return v.get<std::string>();
}

int integer(const json& v, const std::string& ptr) {
  if (!v.is_number_integer()) throw BundleError(ptr, "expected an integer");
  return v.get<int>();
}

const json& object_or_empty(const json& obj, const std::string& key, const std::string& ptr) {
  static const json empty = json::object();
  auto it = obj.find(key);
  if (it == obj.end()) return empty;
  if (!it->is_object()) throw BundleError(at(ptr, key), "expected an object");
  return *it;
}

int object_id(const Category& c, const std::string& name, const std::string& ptr) {
  auto o = c.find_object(name);
  if (!o) throw BundleError(ptr, "unknown object \"" + name + "\"");
  return *o;
}

int arrow_id(const Category& c, const std::string& name, const std::string& ptr) {
  auto a = c.find_arrow(name);
  if (!a) throw BundleError(ptr, "unknown arrow \"" + name + "\"");
  return *a;
}

// --- reading ---------------------------------------------------------------------

CategoryPtr read_category(const json& v, const std::string& ptr) {
  CategoryTables t;
  const json& objs = field(v, "objects", ptr);
  if (!objs.is_array()) throw BundleError(at(ptr, "objects"), "expected an array");
  for (std::size_t i = 0; i < objs.size(); ++i) t.objects.push_back(text(objs[i], at(at(ptr, "objects"), i)));
  if (auto it = v.find("arrows"); it != v.end()) {
    if (!it->is_array()) throw BundleError(at(ptr, "arrows"), "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = at(at(ptr, "arrows"), i);
      const json& a = (*it)[i];
      t.arrows.push_back({text(field(a, "name", p), at(p, "name")), text(field(a, "source", p), at(p, "source")),
                          text(field(a, "target", p), at(p, "target"))});
    }
  }
  for (const auto& [o, name] : object_or_empty(v, "identities", ptr).items())
    t.identities[o] = text(name, at(at(ptr, "identities"), o));
  if (auto it = v.find("compositions"); it != v.end()) {
    if (!it->is_array()) throw BundleError(at(ptr, "compositions"), "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = at(at(ptr, "compositions"), i);
      const json& row = (*it)[i];
      if (!row.is_array() || row.size() != 3) throw BundleError(p, "expected [g, f, g∘f]");
      t.compositions.push_back({text(row[0], at(p, 0)), text(row[1], at(p, 1)), text(row[2], at(p, 2))});
    }
  }
  try {
    return validate_category(t);
  } catch (const CategoryError& e) {
    throw BundleError(ptr, e.what());
  }
}

Functor read_functor_tables(const json& v, const std::string& ptr, const CategoryPtr& src, const CategoryPtr& tgt) {
  FunctorTables t;
  for (const auto& [k, x] : object_or_empty(v, "objects", ptr).items()) {
    object_id(*src, k, at(at(ptr, "objects"), k));
    t.objects[k] = text(x, at(at(ptr, "objects"), k));
  }
  for (const auto& [k, x] : object_or_empty(v, "arrows", ptr).items()) {
    arrow_id(*src, k, at(at(ptr, "arrows"), k));
    t.arrows[k] = text(x, at(at(ptr, "arrows"), k));
  }
  try {
    return validate_functor(t, src, tgt);
  } catch (const CategoryError& e) {
    throw BundleError(ptr, e.what());
  }
}

class Reader {
 public:
  explicit Reader(const json& doc) : doc_(doc) {
    if (!doc.is_object()) throw BundleError("", "expected a JSON object at the top level");
    static const std::set<std::string> known = {"categories", "topologies", "indexed", "functors", "naturals",
                                                "presheaves"};
    for (const auto& [k, v] : doc.items())
      if (!known.count(k)) throw BundleError(at("", k), "unknown section");
  }

  Workspace run() {
    for (const auto& [name, v] : section("categories").items()) ws_.categories[name] = read_category(v, at("/categories", name));
    for (const auto& [name, v] : section("indexed").items()) read_indexed(name, v);
    for (const auto& [name, v] : section("functors").items()) read_functor(name, v);
    for (const auto& [name, v] : section("topologies").items()) topology(name, at("/topologies", name));
    for (const auto& [name, v] : section("naturals").items()) read_natural(name, v);
    for (const auto& [name, v] : section("presheaves").items()) read_presheaf(name, v);
    return std::move(ws_);
  }

 private:
  const json& section(const std::string& key) { return object_or_empty(doc_, key, ""); }

  CategoryPtr category_ref(const json& v, const std::string& ptr) {
    const std::string ref = text(v, ptr);
    try {
      return ws_.category(ref);
    } catch (const std::out_of_range&) {
      throw BundleError(ptr, "undefined category \"" + ref + "\"");
    }
  }

  void read_indexed(const std::string& name, const json& v) {
    const std::string ptr = at("/indexed", name);
    const std::string base_ref = text(field(v, "base", ptr), at(ptr, "base"));
    CategoryPtr base = category_ref(field(v, "base", ptr), at(ptr, "base"));
    const json& fibers = field(v, "fibers", ptr);
    std::vector<CategoryPtr> fib(base->num_objects());
    for (int o = 0; o < base->num_objects(); ++o) {
      const std::string p = at(at(ptr, "fibers"), base->object_name(o));
      auto it = fibers.find(base->object_name(o));
      if (it == fibers.end()) throw BundleError(p, "missing fiber");
      fib[o] = it->is_string() ? category_ref(*it, p) : read_category(*it, p);
    }
    for (const auto& [k, x] : fibers.items()) object_id(*base, k, at(at(ptr, "fibers"), k));
    const json& rs = object_or_empty(v, "restrictions", ptr);
    for (const auto& [k, x] : rs.items()) arrow_id(*base, k, at(at(ptr, "restrictions"), k));
    std::vector<Functor> restrictions;
    for (int f = 0; f < base->num_arrows(); ++f) {
      const std::string p = at(at(ptr, "restrictions"), base->arrow_name(f));
      auto it = rs.find(base->arrow_name(f));
      if (it == rs.end()) {
        if (!base->is_identity(f)) throw BundleError(p, "missing restriction");
        restrictions.push_back(identity_functor(fib[base->src(f)]));
      } else {
        restrictions.push_back(read_functor_tables(*it, p, fib[base->tgt(f)], fib[base->src(f)]));
      }
    }
    try {
      ws_.indexed[name] = {base_ref, grothendieck(validate_indexed(base, fib, restrictions))};
    } catch (const CategoryError& e) {
      throw BundleError(ptr, e.what());
    }
  }

  void read_functor(const std::string& name, const json& v) {
    const std::string ptr = at("/functors", name);
    if (v.contains("projection")) {
      const std::string ix = text(v["projection"], at(ptr, "projection"));
      auto it = ws_.indexed.find(ix);
      if (it == ws_.indexed.end()) throw BundleError(at(ptr, "projection"), "undefined indexed category \"" + ix + "\"");
      ws_.functors[name] = {ix + ".total", it->second.base, it->second.fibration.projection(), ix};
      return;
    }
    const std::string s = text(field(v, "source", ptr), at(ptr, "source"));
    const std::string t = text(field(v, "target", ptr), at(ptr, "target"));
    CategoryPtr src = category_ref(v["source"], at(ptr, "source"));
    CategoryPtr tgt = category_ref(v["target"], at(ptr, "target"));
    Functor f = read_functor_tables(v, ptr, src, tgt);
    ws_.functors[name] = {s, t, std::move(f), std::nullopt};
  }

  const TopologyEntry& topology(const std::string& name, const std::string& ptr) {
    if (auto it = ws_.topologies.find(name); it != ws_.topologies.end()) return it->second;
    const json& all = section("topologies");
    auto it = all.find(name);
    if (it == all.end()) throw BundleError(ptr, "undefined topology \"" + name + "\"");
    const std::string self = at("/topologies", name);
    if (!resolving_.insert(name).second) throw BundleError(self, "cyclic topology reference");
    const json& v = *it;
    TopologyEntry entry;
    if (v.contains("giraud")) {
      const std::string ix = text(v["giraud"], at(self, "giraud"));
      auto gi = ws_.indexed.find(ix);
      if (gi == ws_.indexed.end()) throw BundleError(at(self, "giraud"), "undefined indexed category \"" + ix + "\"");
      const std::string base = text(field(v, "base", self), at(self, "base"));
      const TopologyEntry& j = topology(base, at(self, "base"));
      if (!same_category(j.topology.base(), gi->second.fibration.indexed.base))
        throw BundleError(at(self, "base"), "topology \"" + base + "\" is not on the base of \"" + ix + "\"");
      entry = {ix + ".total", giraud_topology(gi->second.fibration, j.topology), std::make_pair(ix, base)};
    } else {
      const std::string ref = text(field(v, "category", self), at(self, "category"));
      CategoryPtr c = category_ref(v["category"], at(self, "category"));
      Coverage cov(c);
      for (const auto& [obj, families] : object_or_empty(v, "covers", self).items()) {
        const std::string po = at(at(self, "covers"), obj);
        const int o = object_id(*c, obj, po);
        if (!families.is_array()) throw BundleError(po, "expected an array of families");
        for (std::size_t i = 0; i < families.size(); ++i) {
          const std::string pf = at(po, i);
          if (!families[i].is_array()) throw BundleError(pf, "expected an array of arrows");
          std::vector<int> fam;
          for (std::size_t k = 0; k < families[i].size(); ++k) {
            const int a = arrow_id(*c, text(families[i][k], at(pf, k)), at(pf, k));
            if (c->tgt(a) != o) throw BundleError(at(pf, k), "arrow does not end at \"" + obj + "\"");
            fam.push_back(a);
          }
          cov.add(o, fam);
        }
      }
      entry = {ref, saturate(cov), std::nullopt};
    }
    resolving_.erase(name);
    return ws_.topologies[name] = std::move(entry);
  }

  void read_natural(const std::string& name, const json& v) {
    const std::string ptr = at("/naturals", name);
    const std::string s = text(field(v, "source", ptr), at(ptr, "source"));
    const std::string t = text(field(v, "target", ptr), at(ptr, "target"));
    auto fs = ws_.functors.find(s), ft = ws_.functors.find(t);
    if (fs == ws_.functors.end()) throw BundleError(at(ptr, "source"), "undefined functor \"" + s + "\"");
    if (ft == ws_.functors.end()) throw BundleError(at(ptr, "target"), "undefined functor \"" + t + "\"");
    const Functor& f = fs->second.functor;
    const Functor& g = ft->second.functor;
    if (!same_category(f.source, g.source) || !same_category(f.target, g.target))
      throw BundleError(ptr, "functors do not share source and target");
    const json& comps = field(v, "components", ptr);
    std::vector<int> components(f.source->num_objects());
    for (int o = 0; o < f.source->num_objects(); ++o) {
      const std::string p = at(at(ptr, "components"), f.source->object_name(o));
      auto it = comps.find(f.source->object_name(o));
      if (it == comps.end()) throw BundleError(p, "missing component");
      components[o] = arrow_id(*f.target, text(*it, p), p);
    }
    try {
      ws_.naturals[name] = {s, t, validate_natural(f, g, components)};
    } catch (const CategoryError& e) {
      throw BundleError(ptr, e.what());
    }
  }

  void read_presheaf(const std::string& name, const json& v) {
    const std::string ptr = at("/presheaves", name);
    const std::string ref = text(field(v, "category", ptr), at(ptr, "category"));
    CategoryPtr c = category_ref(v["category"], at(ptr, "category"));
    const json& sz = field(v, "sizes", ptr);
    std::vector<int> sizes(c->num_objects());
    for (int o = 0; o < c->num_objects(); ++o) {
      const std::string p = at(at(ptr, "sizes"), c->object_name(o));
      auto it = sz.find(c->object_name(o));
      if (it == sz.end()) throw BundleError(p, "missing size");
      sizes[o] = integer(*it, p);
      if (sizes[o] < 0) throw BundleError(p, "negative size");
    }
    const json& acts = object_or_empty(v, "actions", ptr);
    for (const auto& [k, x] : acts.items()) arrow_id(*c, k, at(at(ptr, "actions"), k));
    std::vector<std::vector<int>> actions(c->num_arrows());
    for (int f = 0; f < c->num_arrows(); ++f) {
      const std::string p = at(at(ptr, "actions"), c->arrow_name(f));
      auto it = acts.find(c->arrow_name(f));
      if (it == acts.end()) {
        if (!c->is_identity(f)) throw BundleError(p, "missing action");
        actions[f].resize(sizes[c->src(f)]);
        for (int x = 0; x < sizes[c->src(f)]; ++x) actions[f][x] = x;
        continue;
      }
      if (!it->is_array()) throw BundleError(p, "expected an array");
      for (std::size_t i = 0; i < it->size(); ++i) actions[f].push_back(integer((*it)[i], at(p, i)));
    }
    try {
      ws_.presheaves[name] = {ref, validate_presheaf(c, sizes, actions)};
    } catch (const CategoryError& e) {
      throw BundleError(ptr, e.what());
    }
  }

  const json& doc_;
  Workspace ws_;
  std::set<std::string> resolving_;
};

// --- writing ---------------------------------------------------------------------

json write_category(const Category& c) {
  json v;
  v["objects"] = json::array();
  for (int o = 0; o < c.num_objects(); ++o) v["objects"].push_back(c.object_name(o));
  // identities are listed too so arrow ids survive a reload
  v["arrows"] = json::array();
  for (int a = 0; a < c.num_arrows(); ++a)
    v["arrows"].push_back(
        {{"name", c.arrow_name(a)}, {"source", c.object_name(c.src(a))}, {"target", c.object_name(c.tgt(a))}});
  json ids = json::object();
  for (int o = 0; o < c.num_objects(); ++o)
    if (c.arrow_name(c.identity(o)) != "id_" + c.object_name(o)) ids[c.object_name(o)] = c.arrow_name(c.identity(o));
  if (!ids.empty()) v["identities"] = ids;
  v["compositions"] = json::array();
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.arrows_out(c.tgt(f)))
      if (!c.is_identity(f) && !c.is_identity(g))
        v["compositions"].push_back({c.arrow_name(g), c.arrow_name(f), c.arrow_name(c.compose(g, f))});
  return v;
}

json write_functor_tables(const Functor& f) {
  json v;
  v["objects"] = json::object();
  v["arrows"] = json::object();
  for (int o = 0; o < f.source->num_objects(); ++o)
    v["objects"][f.source->object_name(o)] = f.target->object_name(f.obj(o));
  for (int a = 0; a < f.source->num_arrows(); ++a)
    if (!f.source->is_identity(a)) v["arrows"][f.source->arrow_name(a)] = f.target->arrow_name(f.arr(a));
  return v;
}

// A generating family of a sieve: members are dropped while the rest still
// generates it.
std::vector<int> generators_of(const Category& c, const ArrowSet& sieve) {
  std::vector<int> members;
  for (int a = 0; a < c.num_arrows(); ++a)
    if (sieve.contains(a)) members.push_back(a);
  ArrowSet keep = sieve;
  for (int a : members) {
    ArrowSet without = keep;
    without.erase(a);
    if (generate(c, without) == sieve) keep = without;
  }
  std::vector<int> out;
  for (int a : members)
    if (keep.contains(a)) out.push_back(a);
  return out;
}

json write_topology(const TopologyEntry& e) {
  if (e.giraud) return {{"giraud", e.giraud->first}, {"base", e.giraud->second}};
  const Category& c = *e.topology.base();
  json covers = json::object();
  for (int o = 0; o < c.num_objects(); ++o) {
    json fams = json::array();
    for (const ArrowSet& s : e.topology.minimal_covers(o)) {
      if (s == e.topology.lattice().sieve(o, e.topology.lattice().count(o) - 1)) continue;
      json fam = json::array();
      for (int a : generators_of(c, s)) fam.push_back(c.arrow_name(a));
      fams.push_back(fam);
    }
    if (!fams.empty()) covers[c.object_name(o)] = fams;
  }
  return {{"category", e.category}, {"covers", covers}};
}

}  // namespace

CategoryPtr Workspace::category(const std::string& ref) const {
  if (auto it = categories.find(ref); it != categories.end()) return it->second;
  const std::string suffix = ".total";
  if (ref.size() > suffix.size() && ref.compare(ref.size() - suffix.size(), suffix.size(), suffix) == 0)
    if (auto it = indexed.find(ref.substr(0, ref.size() - suffix.size())); it != indexed.end())
      return it->second.fibration.total();
  throw std::out_of_range("undefined category \"" + ref + "\"");
}

namespace {
template <class Map>
const typename Map::mapped_type& named(const Map& m, const std::string& name, const char* kind) {
  auto it = m.find(name);
  if (it == m.end()) throw std::out_of_range(std::string("undefined ") + kind + " \"" + name + "\"");
  return it->second;
}
}  // namespace

const TopologyEntry& Workspace::topology(const std::string& name) const { return named(topologies, name, "topology"); }
const IndexedEntry& Workspace::indexed_category(const std::string& name) const {
  return named(indexed, name, "indexed category");
}
const FunctorEntry& Workspace::functor(const std::string& name) const { return named(functors, name, "functor"); }
const PresheafEntry& Workspace::presheaf(const std::string& name) const { return named(presheaves, name, "presheaf"); }

Workspace parse_bundle(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw BundleError("", std::string("parse error: ") + e.what());
  }
  return Reader(doc).run();
}

Workspace load_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BundleError("", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bundle(buf.str());
}

std::string serialize_bundle(const Workspace& ws) {
  json doc;
  doc["categories"] = json::object();
  for (const auto& [name, c] : ws.categories) doc["categories"][name] = write_category(*c);
  doc["indexed"] = json::object();
  for (const auto& [name, e] : ws.indexed) {
    const IndexedCategory& ix = e.fibration.indexed;
    json v;
    v["base"] = e.base;
    for (int o = 0; o < ix.base->num_objects(); ++o) v["fibers"][ix.base->object_name(o)] = write_category(ix.fiber(o));
    v["restrictions"] = json::object();
    for (int f = 0; f < ix.base->num_arrows(); ++f)
      if (!ix.base->is_identity(f)) v["restrictions"][ix.base->arrow_name(f)] = write_functor_tables(ix.restriction(f));
    doc["indexed"][name] = v;
  }
  doc["functors"] = json::object();
  for (const auto& [name, e] : ws.functors) {
    if (e.projection) {
      doc["functors"][name] = {{"projection", *e.projection}};
      continue;
    }
    json v = write_functor_tables(e.functor);
    v["source"] = e.source;
    v["target"] = e.target;
    doc["functors"][name] = v;
  }
  doc["topologies"] = json::object();
  for (const auto& [name, e] : ws.topologies) doc["topologies"][name] = write_topology(e);
  doc["naturals"] = json::object();
  for (const auto& [name, e] : ws.naturals) {
    json comps = json::object();
    const Functor& f = e.natural.source;
    for (int o = 0; o < f.source->num_objects(); ++o)
      comps[f.source->object_name(o)] = f.target->arrow_name(e.natural.at(o));
    doc["naturals"][name] = {{"source", e.source}, {"target", e.target}, {"components", comps}};
  }
  doc["presheaves"] = json::object();
  for (const auto& [name, e] : ws.presheaves) {
    const Presheaf& p = e.presheaf;
    const Category& c = *p.base;
    json v;
    v["category"] = e.category;
    for (int o = 0; o < c.num_objects(); ++o) v["sizes"][c.object_name(o)] = p.size(o);
    v["actions"] = json::object();
    for (int f = 0; f < c.num_arrows(); ++f)
      if (!c.is_identity(f)) v["actions"][c.arrow_name(f)] = p.actions[f];
    doc["presheaves"][name] = v;
  }
  return doc.dump(2) + "\n";
}

bool same_workspace(const Workspace& a, const Workspace& b) {
  auto same_keys = [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return false;
    for (auto i = x.begin(), j = y.begin(); i != x.end(); ++i, ++j)
      if (i->first != j->first) return false;
    return true;
  };
  if (!same_keys(a.categories, b.categories) || !same_keys(a.topologies, b.topologies) ||
      !same_keys(a.indexed, b.indexed) || !same_keys(a.functors, b.functors) || !same_keys(a.naturals, b.naturals) ||
      !same_keys(a.presheaves, b.presheaves))
    return false;
  for (const auto& [k, v] : a.categories)
    if (!same_category(v, b.categories.at(k))) return false;
  for (const auto& [k, v] : a.indexed)
    if (!(v.fibration.indexed == b.indexed.at(k).fibration.indexed)) return false;
  for (const auto& [k, v] : a.topologies)
    if (!(v.topology == b.topologies.at(k).topology)) return false;
  for (const auto& [k, v] : a.functors)
    if (!(v.functor == b.functors.at(k).functor)) return false;
  for (const auto& [k, v] : a.naturals) {
    const NatTransform& m = v.natural;
    const NatTransform& n = b.naturals.at(k).natural;
    if (!(m.source == n.source) || !(m.target == n.target) || m.components != n.components) return false;
  }
  for (const auto& [k, v] : a.presheaves)
    if (!(v.presheaf == b.presheaves.at(k).presheaf)) return false;
  return true;
}

// --- generated instances -------------------------------------------------------------

const std::vector<std::string>& instance_kinds() {
  static const std::vector<std::string> kinds = {"site",        "fibration",    "site-functor", "comorphism",
                                                 "dense-pair",  "adjoint-pair", "prop33-square"};
  return kinds;
}

namespace {

TopologyEntry plain(const std::string& category, const Topology& t) { return {category, t, std::nullopt}; }

// Inline tables only: generated categories live under their own names.
void add_indexed(Workspace& ws, const std::string& name, const std::string& base, const IndexedCategory& ix) {
  ws.indexed[name] = {base, grothendieck(ix)};
}

}  // namespace

Workspace generate_instance(const std::string& kind, std::uint64_t seed, const Caps& caps) {
  Rng rng(split_seed(seed, 0));
  const int n = caps.base_objects;
  if (n < 1 || caps.fiber_objects < 1) throw std::invalid_argument("caps admit no instance");
  Workspace ws;
  if (kind == "site") {
    auto c = random_category(rng, n);
    ws.categories["C"] = c;
    ws.topologies["J"] = plain("C", random_topology(rng, c));
  } else if (kind == "fibration" || kind == "comorphism") {
    auto c = random_category(rng, n);
    ws.categories["C"] = c;
    ws.topologies["J"] = plain("C", random_topology(rng, c));
    add_indexed(ws, "X", "C", random_indexed(rng, c, caps.fiber_objects));
    const Grothendieck& g = ws.indexed["X"].fibration;
    ws.functors["p"] = {"X.total", "C", g.projection(), "X"};
    ws.topologies["Gir"] = {"X.total", giraud_topology(g, ws.topologies["J"].topology), std::make_pair("X", "J")};
  } else if (kind == "site-functor") {
    auto c = random_category(rng, n), d = random_category(rng, n);
    ws.categories["C"] = c;
    ws.categories["D"] = d;
    ws.topologies["J"] = plain("C", random_topology(rng, c));
    ws.topologies["K"] = plain("D", random_topology(rng, d));
    ws.functors["F"] = {"C", "D", random_functor(rng, c, d), std::nullopt};
  } else if (kind == "dense-pair") {
    auto c = random_category(rng, n);
    Topology j = random_topology(rng, c);
    DenseInclusion di = random_dense_inclusion(rng, c, j);
    ws.categories["C"] = c;
    ws.categories["S"] = di.sub.category;
    ws.topologies["J"] = plain("C", j);
    ws.topologies["JS"] = plain("S", di.topology);
    ws.functors["i"] = {"S", "C", di.sub.inclusion, std::nullopt};
  } else if (kind == "adjoint-pair") {
    for (int attempt = 0;; ++attempt) {
      if (attempt == 64) throw std::invalid_argument("no Galois connection found within the caps");
      auto x = random_poset(rng, uniform(rng, 1, n)), y = random_poset(rng, uniform(rng, 1, n));
      auto adj = random_galois_connection(rng, x, y);
      if (!adj) continue;
      ws.categories["X"] = x;
      ws.categories["Y"] = y;
      ws.functors["L"] = {"X", "Y", adj->left, std::nullopt};
      ws.functors["R"] = {"Y", "X", adj->right, std::nullopt};
      ws.functors["IdX"] = {"X", "X", identity_functor(x), std::nullopt};
      ws.functors["IdY"] = {"Y", "Y", identity_functor(y), std::nullopt};
      ws.functors["RL"] = {"X", "X", compose(adj->right, adj->left), std::nullopt};
      ws.functors["LR"] = {"Y", "Y", compose(adj->left, adj->right), std::nullopt};
      ws.naturals["unit"] = {"IdX", "RL", adj->unit};
      ws.naturals["counit"] = {"LR", "IdY", adj->counit};
      break;
    }
  } else if (kind == "prop33-square") {
    auto c = random_category(rng, n);
    ws.categories["C"] = c;
    ws.topologies["J"] = plain("C", random_topology(rng, c));
    IndexedMap m = random_indexed_map(rng, random_indexed(rng, c, caps.fiber_objects));
    add_indexed(ws, "X", "C", m.source);
    add_indexed(ws, "Y", "C", m.target);
    const Grothendieck& gx = ws.indexed["X"].fibration;
    const Grothendieck& gy = ws.indexed["Y"].fibration;
    Functor a = total_functor(gx, gy, m.components);
    ws.functors["A"] = {"X.total", "Y.total", a, std::nullopt};
    ws.functors["B"] = {"C", "C", identity_functor(c), std::nullopt};
    ws.functors["p"] = {"X.total", "C", gx.projection(), "X"};
    ws.functors["q"] = {"Y.total", "C", gy.projection(), "Y"};
    ws.functors["qA"] = {"X.total", "C", compose(gy.projection(), a), std::nullopt};
    ws.naturals["phi"] = {"qA", "qA", identity_natural(compose(gy.projection(), a))};
    ws.topologies["GirY"] = {"Y.total", giraud_topology(gy, ws.topologies["J"].topology), std::make_pair("Y", "J")};
  } else {
    throw std::invalid_argument("unknown instance kind: " + kind);
  }
  return ws;
}

}  // namespace relsite
