#include <set>

#include "doctest.h"
#include "relsite/experiments.hpp"

using namespace relsite;

namespace {

Caps small(int n) {
  Caps c;
  c.base_objects = 3;
  c.fiber_objects = 3;
  c.instances = n;
  return c;
}

}  // namespace

TEST_CASE("every experiment passes at small caps and is deterministic") {
  for (const auto& id : experiment_ids()) {
    CAPTURE(id);
    const Report a = run_experiment(id, 11, small(12));
    const Report b = run_experiment(id, 11, small(12));
    CHECK(a.ok());
    CHECK(a.instances == 12);
    CHECK(a.passed + a.skipped == 12);
    CHECK(a.text() == b.text());
    if (!a.ok()) MESSAGE(a.text());
  }
}

TEST_CASE("a different seed gives a different report") {
  CHECK(run_experiment("thm-2.3", 1, small(8)).text() != run_experiment("thm-2.3", 2, small(8)).text());
}

TEST_CASE("trailer carries the counts") {
  const std::string t = run_experiment("prop-2.5", 3, small(5)).text();
  CHECK(t.find("--- trailer\nid: prop-2.5\nseed: 3\n") != std::string::npos);
  CHECK(t.find("instances: 5\n") != std::string::npos);
  CHECK(t.find("failures: 0\n") != std::string::npos);
  CHECK(t.find("report-digest: ") != std::string::npos);
}

TEST_CASE("replay matches the batch run") {
  const Caps caps = small(10);
  const Report r = run_experiment("prop-2.7-agreement", 5, caps);
  int passed = 0, skipped = 0;
  for (int i = 0; i < caps.instances; ++i) {
    const Outcome o = replay_instance("prop-2.7-agreement", 5, caps, i);
    passed += o.kind == Outcome::Kind::pass;
    skipped += o.kind == Outcome::Kind::skip;
  }
  CHECK(passed == r.passed);
  CHECK(skipped == r.skipped);
  CHECK(shrink_instance("prop-2.7-agreement", 5, caps, 0).empty());
}

TEST_CASE("unknown ids") {
  CHECK_FALSE(has_experiment("prop-9.9"));
  CHECK_THROWS_AS(run_experiment("prop-9.9", 0), std::invalid_argument);
  CHECK_THROWS_AS(replay_instance("prop-9.9", 0, {}, 0), std::invalid_argument);
}

TEST_CASE("coverage ledger is complete") {
  CHECK(missing_coverage().empty());
  std::set<std::string> used;
  for (const auto& e : coverage_ledger()) used.insert(e.experiment);
  for (const auto& id : experiment_ids()) CHECK_MESSAGE(used.count(id), id);
}

TEST_CASE("failing instances are shrunk and replayed") {
  // fails whenever the carrier has two or more objects
  ExperimentBody body = [](Trial& t) {
    CategoryPtr c = t.carrier([](Rng& r) { return random_category(r, 4); });
    if (c->num_objects() >= 2) return Outcome::fail("too big");
    return Outcome::pass();
  };
  const Report r = run_experiment("synthetic", body, 4, small(30));
  REQUIRE_FALSE(r.ok());
  CHECK(r.passed + static_cast<int>(r.failures.size()) == 30);
  for (const auto& f : r.failures) {
    CHECK(f.replay_fails);
    REQUIRE(f.shrunk.size() == 1);
    CHECK(f.shrunk[0].find("carrier 0: 2 objects") == 0);
  }
  const std::string t = r.text();
  CHECK(t.find("result fail\n") != std::string::npos);
  CHECK(t.find("replay: prop synthetic --seed 4 --instance ") != std::string::npos);
}

TEST_CASE("cap errors count as skips") {
  ExperimentBody body = [](Trial&) -> Outcome { throw CapError("too many sieves"); };
  const Report r = run_experiment("capped", body, 0, small(4));
  CHECK(r.ok());
  CHECK(r.skipped == 4);
  CHECK(r.tallies.at("skipped: cap") == 4);
}
