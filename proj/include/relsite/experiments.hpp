#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relsite/generators.hpp"

namespace relsite {

struct Caps {
  int base_objects = 4;
  int fiber_objects = 4;
  int instances = 500;
};

struct Outcome {
  enum class Kind { pass, fail, skip };
  Kind kind = Kind::pass;
  std::string message;

  static Outcome pass() { return {}; }
  static Outcome fail(std::string m) { return {Kind::fail, std::move(m)}; }
  static Outcome skip(std::string m) { return {Kind::skip, std::move(m)}; }
};

/// Random state of one instance. Carriers (the categories an instance is
/// built on) come from their own streams so shrinking can swap them for
/// smaller ones without disturbing the other draws.
class Trial {
 public:
  Trial(std::uint64_t seed, const Caps& caps, const std::vector<CategoryPtr>* fixed = nullptr);

  Rng& rng() { return rng_; }
  const Caps& caps() const { return caps_; }
  CategoryPtr carrier(const std::function<CategoryPtr(Rng&)>& make);
  const std::vector<CategoryPtr>& carriers() const { return carriers_; }
  void tally(const std::string& key, long n = 1) { tallies_[key] += n; }
  const std::map<std::string, long>& tallies() const { return tallies_; }

 private:
  std::uint64_t seed_;
  Caps caps_;
  Rng rng_;
  const std::vector<CategoryPtr>* fixed_;
  std::vector<CategoryPtr> carriers_;
  std::map<std::string, long> tallies_;
};

struct FailureRecord {
  int instance = -1;  // -1 for corpus checks
  std::string label;
  std::string message;
  std::vector<std::string> shrunk;  // carrier descriptions after shrinking
  bool replay_fails = false;
};

struct Report {
  std::string id;
  std::uint64_t seed = 0;
  Caps caps;
  int instances = 0;
  int passed = 0;
  int skipped = 0;
  int corpus_checks = 0;
  std::vector<FailureRecord> failures;
  std::map<std::string, long> tallies;
  double seconds = 0;  // not part of text()

  bool ok() const { return failures.empty(); }
  /// Line-oriented report followed by the trailer; byte-identical for equal
  /// (id, seed, caps).
  std::string text() const;
};

std::uint64_t fnv1a(const std::string& s);

const std::vector<std::string>& experiment_ids();
bool has_experiment(const std::string& id);
/// Throws std::invalid_argument for an unknown id.
Report run_experiment(const std::string& id, std::uint64_t seed, const Caps& caps = {});
using ExperimentBody = std::function<Outcome(Trial&)>;
/// Same loop, shrinking and report for an unregistered body (no corpus checks).
Report run_experiment(const std::string& id, const ExperimentBody& body, std::uint64_t seed, const Caps& caps = {});
/// Re-runs a single fuzz instance.
Outcome replay_instance(const std::string& id, std::uint64_t seed, const Caps& caps, int instance);
/// Greedy object deletion over the carriers of a failing instance; returns
/// the smallest carriers that still fail.
std::vector<CategoryPtr> shrink_instance(const std::string& id, std::uint64_t seed, const Caps& caps, int instance);

/// Claims that must each be exercised by a registered experiment.
struct CoverageEntry {
  std::string claim;
  std::string experiment;
};
const std::vector<CoverageEntry>& coverage_ledger();
/// Ledger entries whose experiment is not registered.
std::vector<CoverageEntry> missing_coverage();

/// One-line category summary used in failure reports.
std::string compact(const Category& c);

}  // namespace relsite
