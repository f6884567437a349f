#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "relsite/arrow_set.hpp"

namespace relsite {

/// Raised when tables fail one of the category axioms or a functor fails
/// functoriality. The message names the first violated law and its witness.
class CategoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input or an intermediate construction exceeds a size cap.
class CapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SieveLattice;
class Category;
using CategoryPtr = std::shared_ptr<const Category>;

struct ArrowSpec {
  std::string name;
  std::string source;
  std::string target;
};

/// Raw, name-based description of a finite category. Identities missing from
/// `identities` are generated as "id_<object>", and composites with an
/// identity factor are implicit.
struct CategoryTables {
  std::vector<std::string> objects;
  std::vector<ArrowSpec> arrows;
  std::map<std::string, std::string> identities;
  std::vector<std::array<std::string, 3>> compositions;  // {g, f, g∘f}
};

/// An explicit finite category. Arrows and objects are dense integer ids into
/// the tables; names are kept for reporting and serialization. Immutable once
/// built, so it is shared freely through CategoryPtr.
class Category {
 public:
  int num_objects() const { return static_cast<int>(object_names_.size()); }
  int num_arrows() const { return static_cast<int>(arrow_names_.size()); }

  const std::string& object_name(int o) const { return object_names_[o]; }
  const std::string& arrow_name(int a) const { return arrow_names_[a]; }
  std::optional<int> find_object(const std::string& name) const;
  std::optional<int> find_arrow(const std::string& name) const;

  int src(int a) const { return src_[a]; }
  int tgt(int a) const { return tgt_[a]; }
  int identity(int o) const { return identity_[o]; }
  bool is_identity(int a) const { return identity_[src_[a]] == a; }

  /// g∘f, or -1 when tgt(f) != src(g).
  int compose(int g, int f) const { return table_[static_cast<std::size_t>(g) * num_arrows() + f]; }

  std::span<const int> hom(int x, int y) const { return homs_[static_cast<std::size_t>(x) * num_objects() + y]; }
  std::span<const int> arrows_into(int y) const { return into_[y]; }
  std::span<const int> arrows_out(int x) const { return out_[x]; }

  bool is_iso(int a) const { return inverse(a).has_value(); }
  std::optional<int> inverse(int a) const;

  /// Sieves on every object together with their pullback tables. Built on
  /// first use; throws CapError when the lattice is too large.
  const SieveLattice& lattice() const;

  /// Same tables (names included).
  bool same_as(const Category& o) const;

  std::string describe() const;

 private:
  friend class CategoryBuilder;
  Category() = default;
  void index();
  void check_axioms() const;

  std::vector<std::string> object_names_;
  std::vector<std::string> arrow_names_;
  std::vector<int> src_, tgt_, identity_;
  std::vector<int> table_;
  std::vector<std::vector<int>> homs_, into_, out_;
  std::unordered_map<std::string, int> object_index_, arrow_index_;

  mutable std::once_flag lattice_once_;
  mutable std::shared_ptr<const SieveLattice> lattice_;
};

/// Incremental construction of a category from ids. Every operation that
/// builds a new category (comma categories, Grothendieck constructions,
/// slices, ...) goes through here so the axioms are always re-checked.
class CategoryBuilder {
 public:
  int add_object(std::string name);
  /// Adds an object with an identity arrow named `id_name` (or "id_<name>").
  int add_object_with_identity(std::string name, std::string id_name = {});
  int add_arrow(std::string name, int src, int tgt);
  void set_identity(int obj, int arrow);
  void set_composite(int g, int f, int gf);

  int num_objects() const { return static_cast<int>(objects_.size()); }
  int num_arrows() const { return static_cast<int>(arrows_.size()); }
  int src(int a) const { return arrows_[a].src; }
  int tgt(int a) const { return arrows_[a].tgt; }

  /// Fills every composable pair with `fn(g, f)`, then validates.
  template <class Fn>
  CategoryPtr build_with(Fn&& fn) {
    prepare_table();
    for (int f = 0; f < num_arrows(); ++f)
      for (int g = 0; g < num_arrows(); ++g)
        if (arrows_[f].tgt == arrows_[g].src) table_[idx(g, f)] = fn(g, f);
    return finish(true);
  }

  /// Validates using composites registered through set_composite. Pairs with
  /// an identity factor are filled implicitly.
  CategoryPtr build();

 private:
  struct Arrow {
    std::string name;
    int src, tgt;
  };
  std::size_t idx(int g, int f) const { return static_cast<std::size_t>(g) * arrows_.size() + f; }
  void prepare_table();
  CategoryPtr finish(bool table_complete);

  std::vector<std::string> objects_;
  std::vector<Arrow> arrows_;
  std::vector<int> identity_;
  std::vector<int> table_;
  std::vector<std::array<int, 3>> pending_;
};

CategoryPtr validate_category(const CategoryTables& tables);

/// Tables of an existing category, identities and identity composites
/// included explicitly.
CategoryTables tables_of(const Category& c);

// Small named categories used throughout tests and the corpus.
CategoryPtr terminal_category();                  // One
CategoryPtr walking_arrow();                      // Walk2: a --u--> b
CategoryPtr discrete_category(int n, const std::string& prefix = "x");
/// Poset category from a reflexive-transitive relation leq[i][j] (i <= j).
CategoryPtr poset_category(const std::vector<std::vector<bool>>& leq,
                           const std::vector<std::string>& names = {});
/// x, y with s: y -> x, r: x -> y, r∘s = id_y, s∘r = e idempotent.
CategoryPtr split_epi_category();

}  // namespace relsite
