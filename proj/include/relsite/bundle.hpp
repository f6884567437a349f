#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "relsite/experiments.hpp"
#include "relsite/sheaf.hpp"

namespace relsite {

/// Input error located by a JSON pointer into the bundle ("/functors/p/arrows/u").
class BundleError : public std::runtime_error {
 public:
  BundleError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer.empty() ? message : pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct TopologyEntry {
  std::string category;  // reference as written
  Topology topology;
  std::optional<std::pair<std::string, std::string>> giraud;  // (indexed, base topology)
};

struct IndexedEntry {
  std::string base;
  Grothendieck fibration;
};

struct FunctorEntry {
  std::string source;
  std::string target;
  Functor functor;
  std::optional<std::string> projection;  // indexed name
};

struct NaturalEntry {
  std::string source;
  std::string target;
  NatTransform natural;
};

struct PresheafEntry {
  std::string category;
  Presheaf presheaf;
};

/// Everything a bundle names, validated. Besides the entries of
/// "categories", a category reference may be "<indexed>.total".
struct Workspace {
  std::map<std::string, CategoryPtr> categories;
  std::map<std::string, TopologyEntry> topologies;
  std::map<std::string, IndexedEntry> indexed;
  std::map<std::string, FunctorEntry> functors;
  std::map<std::string, NaturalEntry> naturals;
  std::map<std::string, PresheafEntry> presheaves;

  CategoryPtr category(const std::string& ref) const;
  const TopologyEntry& topology(const std::string& name) const;
  const IndexedEntry& indexed_category(const std::string& name) const;
  const FunctorEntry& functor(const std::string& name) const;
  const PresheafEntry& presheaf(const std::string& name) const;
};

Workspace parse_bundle(const std::string& text);
Workspace load_bundle(const std::string& path);
/// Canonical JSON: sorted keys, topologies as their minimal covers.
std::string serialize_bundle(const Workspace& ws);
/// Same entities with equal tables.
bool same_workspace(const Workspace& a, const Workspace& b);

/// A random valid instance of `kind` as a workspace. Kinds: site, fibration,
/// site-functor, comorphism, dense-pair, adjoint-pair, prop33-square.
Workspace generate_instance(const std::string& kind, std::uint64_t seed, const Caps& caps);
const std::vector<std::string>& instance_kinds();

}  // namespace relsite
