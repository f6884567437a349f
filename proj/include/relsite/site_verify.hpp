#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relsite/sheaf.hpp"

namespace relsite {

struct SiteFunctor {
  Functor functor;
  Topology source;  // on functor.source
  Topology target;  // on functor.target
};

/// One local condition of a decider, with the data needed to evaluate it
/// again. `object` and `sieve` live on whichever side the condition names.
struct Witness {
  std::string condition;
  int object = -1;
  ArrowSet sieve;
  std::vector<int> arrows;
  std::string detail;
};

struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;  // first failing condition
  std::vector<Witness> trace;      // a sample of conditions that held
};

/// Limit on the number of positive conditions kept in a trace.
inline constexpr std::size_t kTraceLimit = 16;

Verdict is_comorphism(const SiteFunctor& s);
Verdict is_cover_preserving(const SiteFunctor& s);
/// Cover preservation plus the zig-zag condition on commuting squares over
/// every cover.
Verdict is_continuous(const SiteFunctor& s);
/// Local versions of: nonempty cones, spans over pairs, equalized pairs.
Verdict is_covering_flat(const SiteFunctor& s);
Verdict is_morphism_of_sites(const SiteFunctor& s);
/// Morphism of sites, cover reflection, covering by images, local fullness
/// and local faithfulness.
Verdict is_dense_morphism(const SiteFunctor& s);

/// Re-evaluates the local condition recorded in `w`; true when it holds.
bool evaluate(const SiteFunctor& s, const Witness& w);

/// The square A: D' -> D over B: C' -> C with p: D -> C, p': D' -> C' and
/// φ: pA => Bp', and the topology on D.
struct LiftingSquare {
  Functor a, b, p, p2;
  NatTransform phi;
  Topology k;
};

Verdict check_prop33_conditions(const LiftingSquare& sq);
bool evaluate(const LiftingSquare& sq, const Witness& w);

std::string describe(const Verdict& v, const SiteFunctor* context = nullptr);

}  // namespace relsite
