#include "relsite/category.hpp"

#include <algorithm>
#include <sstream>

namespace relsite {

std::optional<int> Category::find_object(const std::string& name) const {
  auto it = object_index_.find(name);
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Category::find_arrow(const std::string& name) const {
  auto it = arrow_index_.find(name);
  if (it == arrow_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Category::inverse(int a) const {
  for (int b : hom(tgt(a), src(a)))
    if (compose(b, a) == identity(src(a)) && compose(a, b) == identity(tgt(a))) return b;
  return std::nullopt;
}

bool Category::same_as(const Category& o) const {
  return object_names_ == o.object_names_ && arrow_names_ == o.arrow_names_ && src_ == o.src_ &&
         tgt_ == o.tgt_ && identity_ == o.identity_ && table_ == o.table_;
}

std::string Category::describe() const {
  std::ostringstream os;
  os << num_objects() << " objects, " << num_arrows() << " arrows";
  return os.str();
}

void Category::index() {
  const int n = num_objects();
  homs_.assign(static_cast<std::size_t>(n) * n, {});
  into_.assign(n, {});
  out_.assign(n, {});
  object_index_.clear();
  arrow_index_.clear();
  for (int o = 0; o < n; ++o) object_index_.emplace(object_names_[o], o);
  for (int a = 0; a < num_arrows(); ++a) {
    arrow_index_.emplace(arrow_names_[a], a);
    homs_[static_cast<std::size_t>(src_[a]) * n + tgt_[a]].push_back(a);
    into_[tgt_[a]].push_back(a);
    out_[src_[a]].push_back(a);
  }
}

void Category::check_axioms() const {
  const int m = num_arrows();
  auto name = [&](int a) { return arrow_names_[a]; };
  for (int o = 0; o < num_objects(); ++o) {
    int i = identity_[o];
    if (i < 0 || src_[i] != o || tgt_[i] != o)
      throw CategoryError("identity of object " + object_names_[o] + " has wrong endpoints");
  }
  for (int f = 0; f < m; ++f) {
    for (int g = 0; g < m; ++g) {
      int gf = compose(g, f);
      if (tgt_[f] != src_[g]) {
        if (gf != -1) throw CategoryError("non-composable pair (" + name(g) + ", " + name(f) + ")");
        continue;
      }
      if (gf < 0) throw CategoryError("missing composite (" + name(g) + ", " + name(f) + ")");
      if (src_[gf] != src_[f] || tgt_[gf] != tgt_[g])
        throw CategoryError("composite (" + name(g) + ", " + name(f) + ") has wrong endpoints");
    }
    if (compose(identity_[tgt_[f]], f) != f || compose(f, identity_[src_[f]]) != f)
      throw CategoryError("identity law fails at " + name(f));
  }
  for (int f = 0; f < m; ++f)
    for (int g : out_[tgt_[f]])
      for (int h : out_[tgt_[g]])
        if (compose(h, compose(g, f)) != compose(compose(h, g), f))
          throw CategoryError("associativity fails at (" + name(h) + ", " + name(g) + ", " + name(f) + ")");
}

// ---------------------------------------------------------------------------

int CategoryBuilder::add_object(std::string name) {
  objects_.push_back(std::move(name));
  identity_.push_back(-1);
  return num_objects() - 1;
}

int CategoryBuilder::add_object_with_identity(std::string name, std::string id_name) {
  if (id_name.empty()) id_name = "id_" + name;
  int o = add_object(std::move(name));
  set_identity(o, add_arrow(std::move(id_name), o, o));
  return o;
}

int CategoryBuilder::add_arrow(std::string name, int src, int tgt) {
  arrows_.push_back({std::move(name), src, tgt});
  return num_arrows() - 1;
}

void CategoryBuilder::set_identity(int obj, int arrow) { identity_[obj] = arrow; }

void CategoryBuilder::set_composite(int g, int f, int gf) { pending_.push_back({g, f, gf}); }

void CategoryBuilder::prepare_table() {
  if (num_objects() > kMaxObjects)
    throw CapError("category has " + std::to_string(num_objects()) + " objects (cap " +
                   std::to_string(kMaxObjects) + ")");
  if (num_arrows() > kMaxArrows)
    throw CapError("category has " + std::to_string(num_arrows()) + " arrows (cap " +
                   std::to_string(kMaxArrows) + ")");
  table_.assign(arrows_.size() * arrows_.size(), -1);
}

CategoryPtr CategoryBuilder::build() {
  prepare_table();
  for (int o = 0; o < num_objects(); ++o)
    if (identity_[o] < 0) throw CategoryError("object " + objects_[o] + " has no identity");
  for (int f = 0; f < num_arrows(); ++f) {
    table_[idx(identity_[arrows_[f].tgt], f)] = f;
    table_[idx(f, identity_[arrows_[f].src])] = f;
  }
  for (auto [g, f, gf] : pending_) {
    if (arrows_[f].tgt != arrows_[g].src)
      throw CategoryError("non-composable pair (" + arrows_[g].name + ", " + arrows_[f].name + ")");
    int& slot = table_[idx(g, f)];
    if (slot >= 0 && slot != gf)
      throw CategoryError("conflicting composite for (" + arrows_[g].name + ", " + arrows_[f].name + ")");
    slot = gf;
  }
  return finish(false);
}

CategoryPtr CategoryBuilder::finish(bool) {
  auto cat = std::shared_ptr<Category>(new Category());
  cat->object_names_ = objects_;
  for (const auto& a : arrows_) {
    if (a.src < 0 || a.src >= num_objects() || a.tgt < 0 || a.tgt >= num_objects())
      throw CategoryError("arrow " + a.name + " has a dangling endpoint");
    cat->arrow_names_.push_back(a.name);
    cat->src_.push_back(a.src);
    cat->tgt_.push_back(a.tgt);
  }
  cat->identity_ = identity_;
  for (int o = 0; o < num_objects(); ++o)
    if (identity_[o] < 0) throw CategoryError("object " + objects_[o] + " has no identity");
  cat->table_ = table_;
  cat->index();
  if (cat->object_index_.size() != objects_.size()) throw CategoryError("duplicate object name");
  if (cat->arrow_index_.size() != arrows_.size()) throw CategoryError("duplicate arrow name");
  cat->check_axioms();
  return cat;
}

// ---------------------------------------------------------------------------

CategoryPtr validate_category(const CategoryTables& t) {
  CategoryBuilder b;
  std::unordered_map<std::string, int> obj, arr;
  for (const auto& o : t.objects) {
    if (obj.count(o)) throw CategoryError("duplicate object " + o);
    obj[o] = b.add_object(o);
  }
  auto object = [&](const std::string& n) {
    auto it = obj.find(n);
    if (it == obj.end()) throw CategoryError("dangling object " + n);
    return it->second;
  };
  for (const auto& a : t.arrows) {
    if (arr.count(a.name)) throw CategoryError("duplicate arrow " + a.name);
    arr[a.name] = b.add_arrow(a.name, object(a.source), object(a.target));
  }
  for (const auto& o : t.objects) {
    auto it = t.identities.find(o);
    if (it != t.identities.end()) {
      auto a = arr.find(it->second);
      if (a == arr.end()) throw CategoryError("dangling identity arrow " + it->second);
      b.set_identity(obj[o], a->second);
    } else {
      std::string id = "id_" + o;
      if (arr.count(id)) {
        b.set_identity(obj[o], arr[id]);
      } else {
        arr[id] = b.add_arrow(id, obj[o], obj[o]);
        b.set_identity(obj[o], arr[id]);
      }
    }
  }
  for (const auto& [g, f, gf] : t.compositions) {
    auto arrow = [&](const std::string& n) {
      auto it = arr.find(n);
      if (it == arr.end()) throw CategoryError("dangling arrow " + n);
      return it->second;
    };
    b.set_composite(arrow(g), arrow(f), arrow(gf));
  }
  return b.build();
}

CategoryTables tables_of(const Category& c) {
  CategoryTables t;
  for (int o = 0; o < c.num_objects(); ++o) {
    t.objects.push_back(c.object_name(o));
    t.identities[c.object_name(o)] = c.arrow_name(c.identity(o));
  }
  for (int a = 0; a < c.num_arrows(); ++a)
    t.arrows.push_back({c.arrow_name(a), c.object_name(c.src(a)), c.object_name(c.tgt(a))});
  for (int f = 0; f < c.num_arrows(); ++f)
    for (int g : c.arrows_out(c.tgt(f)))
      if (!c.is_identity(f) && !c.is_identity(g))
        t.compositions.push_back({c.arrow_name(g), c.arrow_name(f), c.arrow_name(c.compose(g, f))});
  return t;
}

CategoryPtr terminal_category() {
  CategoryBuilder b;
  b.add_object_with_identity("*");
  return b.build();
}

CategoryPtr walking_arrow() {
  CategoryBuilder b;
  int a = b.add_object_with_identity("a");
  int bb = b.add_object_with_identity("b");
  b.add_arrow("u", a, bb);
  return b.build();
}

CategoryPtr discrete_category(int n, const std::string& prefix) {
  CategoryBuilder b;
  for (int i = 0; i < n; ++i) b.add_object_with_identity(prefix + std::to_string(i));
  return b.build();
}

CategoryPtr poset_category(const std::vector<std::vector<bool>>& leq, const std::vector<std::string>& names) {
  const int n = static_cast<int>(leq.size());
  CategoryBuilder b;
  std::vector<std::string> nm = names;
  if (nm.empty())
    for (int i = 0; i < n; ++i) nm.push_back("p" + std::to_string(i));
  for (int i = 0; i < n; ++i) b.add_object(nm[i]);
  std::vector<int> arrow(static_cast<std::size_t>(n) * n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (leq[i][j]) {
        int a = b.add_arrow(i == j ? "id_" + nm[i] : nm[i] + "<" + nm[j], i, j);
        arrow[static_cast<std::size_t>(i) * n + j] = a;
        if (i == j) b.set_identity(i, a);
      }
  for (int i = 0; i < n; ++i)
    if (!leq[i][i]) throw CategoryError("poset relation is not reflexive at " + nm[i]);
  return b.build_with([&](int g, int f) {
    int i = b.src(f), k = b.tgt(g);
    int a = arrow[static_cast<std::size_t>(i) * n + k];
    if (a < 0) throw CategoryError("poset relation is not transitive");
    return a;
  });
}

CategoryPtr split_epi_category() {
  CategoryTables t;
  t.objects = {"x", "y"};
  t.arrows = {{"s", "y", "x"}, {"r", "x", "y"}, {"e", "x", "x"}};
  t.compositions = {{"r", "s", "id_y"}, {"s", "r", "e"}, {"e", "e", "e"}, {"e", "s", "s"}, {"r", "e", "r"}};
  return validate_category(t);
}

}  // namespace relsite
