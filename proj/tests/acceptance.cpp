// Acceptance run: one PASS/FAIL line per criterion on stdout, timings on
// stderr. Exit status 1 if any criterion fails.

#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "relsite/experiments.hpp"

using namespace relsite;

namespace {

struct Criterion {
  std::string title;
  std::vector<std::string> experiments;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"topology soundness", {"topology-soundness"}},
      {"Giraud minimality", {"def-2.5-minimality"}},
      {"Giraud projections and fibration morphisms are continuous", {"thm-2.3"}},
      {"direct image reflects cartesian arrows", {"prop-2.5"}},
      {"adjoint-case inverse image agrees with the pointwise oracle", {"prop-2.7-agreement"}},
      {"direct-image projection is continuous and a comorphism", {"prop-3.4", "prop-4.2"}},
      {"direct image along a dense morphism is dense", {"prop-4.6"}},
      {"composition of base changes", {"prop-4.4"}},
      {"sheafification", {"sheafify"}},
      {"continuous functors preserve sheaves", {"continuity-sheaves"}},
      {"induced topology contains Giraud's", {"prop-4.12-containment"}},
  };
  return all;
}

struct Run {
  Report report;
  bool deterministic = false;
};

std::string counts(const Report& r) {
  std::ostringstream os;
  os << r.id << ' ' << r.instances << " instances (" << r.passed << " pass, " << r.skipped << " skip, "
     << r.failures.size() << " fail), " << r.corpus_checks << " corpus checks";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance run over every experiment"};
  std::uint64_t seed = 1;
  Caps caps;
  double budget = 60;
  app.add_option("--seed", seed);
  app.add_option("--instances", caps.instances)->check(CLI::PositiveNumber);
  app.add_option("--time-target", budget, "Seconds per experiment");
  CLI11_PARSE(app, argc, argv);

  std::map<std::string, Run> runs;
  for (const auto& id : experiment_ids()) {
    Report a = run_experiment(id, seed, caps);
    Report b = run_experiment(id, seed, caps);
    std::cerr << std::fixed << std::setprecision(2) << id << ": " << a.seconds << " s, rerun " << b.seconds << " s"
              << (a.seconds > budget ? " (over the time target)" : "") << '\n';
    runs[id] = {a, a.text() == b.text()};
  }

  int failed = 0;
  int n = 0;
  auto line = [&](bool ok, const std::string& title, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << ' ' << ++n << ' ' << title << ": " << detail << '\n';
    if (!ok) ++failed;
  };
  for (const auto& c : criteria()) {
    bool ok = true;
    std::string detail;
    for (const auto& id : c.experiments) {
      const Report& r = runs.at(id).report;
      ok = ok && r.ok() && r.instances >= 500;
      detail += (detail.empty() ? "" : "; ") + counts(r);
      for (const auto& f : r.failures) std::cerr << "  " << id << ' ' << f.label << ": " << f.message << '\n';
    }
    line(ok, c.title, detail);
  }
  std::string nondet;
  for (const auto& [id, run] : runs)
    if (!run.deterministic) nondet += (nondet.empty() ? "" : ", ") + id;
  line(nondet.empty(), "determinism",
       nondet.empty() ? std::to_string(runs.size()) + " experiments byte-identical across two runs"
                      : "reports differ for " + nondet);
  return failed ? 1 : 0;
}
