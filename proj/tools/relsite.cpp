// relsite: command-line front end over site bundles and the experiment suite.
//
// Exit codes: 0 all assertions held, 1 an assertion failed (witness printed),
// 2 input error.

#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "relsite/bundle.hpp"
#include "relsite/site_verify.hpp"

using namespace relsite;

namespace {

constexpr int kOk = 0;
constexpr int kAssertion = 1;
constexpr int kInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Caps parse_caps(const std::string& spec) {
  Caps caps;
  if (spec.empty()) return caps;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("caps entry \"" + item + "\" is not key=value");
    const std::string key = item.substr(0, eq);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("caps value in \"" + item + "\" is not an integer");
    }
    if (value < 1) throw InputError("caps value in \"" + item + "\" must be positive");
    if (key == "base")
      caps.base_objects = value;
    else if (key == "fiber")
      caps.fiber_objects = value;
    else if (key == "instances")
      caps.instances = value;
    else
      throw InputError("unknown caps key \"" + key + "\" (base, fiber, instances)");
  }
  return caps;
}

void require_on(const Topology& t, const CategoryPtr& c, const std::string& what) {
  if (!same_category(t.base(), c)) throw InputError(what + " is not a topology on that category");
}

std::string summary(const Workspace& ws) {
  std::ostringstream os;
  for (const auto& [name, c] : ws.categories)
    os << "category " << name << ": " << c->num_objects() << " objects, " << c->num_arrows() << " arrows\n";
  for (const auto& [name, e] : ws.indexed)
    os << "indexed " << name << " over " << e.base << ": total " << e.fibration.total()->num_objects() << " objects, "
       << e.fibration.total()->num_arrows() << " arrows\n";
  for (const auto& [name, e] : ws.topologies)
    os << "topology " << name << " on " << e.category << ": " << e.topology.cover_count() << " covering sieves\n";
  for (const auto& [name, e] : ws.functors) os << "functor " << name << ": " << e.source << " -> " << e.target << '\n';
  for (const auto& [name, e] : ws.naturals) os << "natural " << name << ": " << e.source << " => " << e.target << '\n';
  for (const auto& [name, e] : ws.presheaves) {
    os << "presheaf " << name << " on " << e.category << ":";
    const Category& c = *e.presheaf.base;
    for (int o = 0; o < c.num_objects(); ++o) os << ' ' << c.object_name(o) << '=' << e.presheaf.size(o);
    os << '\n';
  }
  return os.str();
}

std::string functor_text(const Functor& f) {
  std::vector<std::string> lines;
  for (int o = 0; o < f.source->num_objects(); ++o)
    lines.push_back("  " + f.source->object_name(o) + " |-> " + f.target->object_name(f.obj(o)));
  std::sort(lines.begin(), lines.end());
  std::vector<std::string> arrows;
  for (int a = 0; a < f.source->num_arrows(); ++a)
    arrows.push_back("  " + f.source->arrow_name(a) + " |-> " + f.target->arrow_name(f.arr(a)));
  std::sort(arrows.begin(), arrows.end());
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  for (const auto& l : arrows) out += l + '\n';
  return out;
}

Verdict decide(const std::string& kind, const SiteFunctor& s) {
  if (kind == "comorphism") return is_comorphism(s);
  if (kind == "cover") return is_cover_preserving(s);
  if (kind == "continuous") return is_continuous(s);
  if (kind == "flat") return is_covering_flat(s);
  if (kind == "site-morphism") return is_morphism_of_sites(s);
  return is_dense_morphism(s);
}

int run_report(const Report& r) {
  std::cout << r.text();
  std::cerr << r.id << ": " << r.instances << " instances in " << r.seconds << " s\n";
  return r.ok() ? kOk : kAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite sites, fibrations and Giraud topologies"};
  app.require_subcommand(1);
  std::string bundle, a1, a2, a3, kind, id, caps_spec;
  std::uint64_t seed = 0;
  int instance = -1;
  bool all = false;

  auto* validate = app.add_subcommand("validate", "Load and validate a bundle");
  validate->add_option("bundle", bundle)->required();

  auto* giraud = app.add_subcommand("giraud", "Print the Giraud topology of an indexed category");
  giraud->add_option("bundle", bundle)->required();
  giraud->add_option("indexed", a1)->required();
  giraud->add_option("topology", a2)->required();

  auto* check = app.add_subcommand("check", "Decide a class of functors between sites");
  check->add_option("kind", kind)->required()->check(
      CLI::IsMember({"comorphism", "cover", "continuous", "flat", "site-morphism", "dense"}));
  check->add_option("bundle", bundle)->required();
  check->add_option("functor", a1)->required();
  check->add_option("source-topology", a2)->required();
  check->add_option("target-topology", a3)->required();

  auto* sheafify_cmd = app.add_subcommand("sheafify", "Sheafify a presheaf");
  sheafify_cmd->add_option("bundle", bundle)->required();
  sheafify_cmd->add_option("presheaf", a1)->required();
  sheafify_cmd->add_option("topology", a2)->required();

  auto* pullback = app.add_subcommand("pullback", "Direct image of an indexed category along a functor");
  pullback->add_option("bundle", bundle)->required();
  pullback->add_option("indexed", a1)->required();
  pullback->add_option("functor", a2)->required();

  auto* prop = app.add_subcommand("prop", "Run one experiment");
  prop->add_option("id", id)->required();
  prop->add_option("--seed", seed);
  prop->add_option("--caps", caps_spec, "base=N,fiber=N,instances=N");
  prop->add_option("--instance", instance, "Replay a single instance and shrink it if it fails");

  auto* fuzz = app.add_subcommand("fuzz", "Run every experiment");
  fuzz->add_flag("--all", all)->required();
  fuzz->add_option("--seed", seed);
  fuzz->add_option("--caps", caps_spec, "base=N,fiber=N,instances=N");

  auto* generate = app.add_subcommand("generate", "Print a random instance as a bundle");
  generate->add_option("kind", kind)->required()->check(CLI::IsMember(instance_kinds()));
  generate->add_option("--seed", seed);
  generate->add_option("--caps", caps_spec, "base=N,fiber=N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*validate) {
      std::cout << summary(load_bundle(bundle)) << "ok\n";
      return kOk;
    }
    if (*giraud) {
      Workspace ws = load_bundle(bundle);
      const IndexedEntry& ix = ws.indexed_category(a1);
      const TopologyEntry& j = ws.topology(a2);
      require_on(j.topology, ix.fibration.indexed.base, "\"" + a2 + "\"");
      Topology gir = giraud_topology(ix.fibration, j.topology);
      std::cout << "total " << ix.fibration.total()->num_objects() << " objects, "
                << ix.fibration.total()->num_arrows() << " arrows\n"
                << describe(gir);
      return kOk;
    }
    if (*check) {
      Workspace ws = load_bundle(bundle);
      const FunctorEntry& f = ws.functor(a1);
      const TopologyEntry& src = ws.topology(a2);
      const TopologyEntry& tgt = ws.topology(a3);
      require_on(src.topology, f.functor.source, "\"" + a2 + "\" (source of " + a1 + ")");
      require_on(tgt.topology, f.functor.target, "\"" + a3 + "\" (target of " + a1 + ")");
      SiteFunctor s{f.functor, src.topology, tgt.topology};
      Verdict v = decide(kind, s);
      std::cout << describe(v, &s);
      return v.holds ? kOk : kAssertion;
    }
    if (*sheafify_cmd) {
      Workspace ws = load_bundle(bundle);
      const PresheafEntry& p = ws.presheaf(a1);
      const TopologyEntry& j = ws.topology(a2);
      require_on(j.topology, p.presheaf.base, "\"" + a2 + "\"");
      Sheafification s = sheafify(p.presheaf, j.topology);
      std::cout << describe(s.sheaf);
      const SheafCheck chk = is_sheaf(s.sheaf, j.topology);
      std::cout << "sheaf " << (chk.holds ? "true" : "false") << '\n';
      return chk.holds ? kOk : kAssertion;
    }
    if (*pullback) {
      Workspace ws = load_bundle(bundle);
      const IndexedEntry& ix = ws.indexed_category(a1);
      const FunctorEntry& f = ws.functor(a2);
      if (!same_category(f.functor.target, ix.fibration.indexed.base))
        throw InputError("\"" + a2 + "\" does not land in the base of \"" + a1 + "\"");
      DirectImage di = direct_image(ix.fibration, f.functor);
      std::cout << describe(di.pulled) << "q\n" << functor_text(di.q);
      const bool ok = q_reflects_cartesian(di, ix.fibration);
      std::cout << "q reflects cartesian arrows " << (ok ? "true" : "false") << '\n';
      return ok ? kOk : kAssertion;
    }
    if (*prop) {
      const Caps caps = parse_caps(caps_spec);
      if (!has_experiment(id)) throw InputError("unknown experiment id \"" + id + "\"");
      if (instance < 0) return run_report(run_experiment(id, seed, caps));
      const Outcome o = replay_instance(id, seed, caps, instance);
      static const char* names[] = {"pass", "fail", "skip"};
      std::cout << "experiment " << id << " seed " << seed << " instance " << instance << ": "
                << names[static_cast<int>(o.kind)] << '\n';
      if (!o.message.empty()) std::cout << o.message << '\n';
      if (o.kind == Outcome::Kind::fail)
        for (const auto& c : shrink_instance(id, seed, caps, instance)) std::cout << "shrunk " << compact(*c) << '\n';
      return o.kind == Outcome::Kind::fail ? kAssertion : kOk;
    }
    if (*fuzz) {
      const Caps caps = parse_caps(caps_spec);
      if (auto missing = missing_coverage(); !missing.empty()) {
        for (const auto& m : missing) std::cerr << "no experiment \"" << m.experiment << "\" for: " << m.claim << '\n';
        std::cerr << "refusing to build a release report\n";
        return kInput;
      }
      int failed = 0;
      for (const auto& e : experiment_ids()) {
        if (run_report(run_experiment(e, seed, caps)) != kOk) ++failed;
        std::cout << '\n';
      }
      std::cout << "experiments " << experiment_ids().size() << " failed " << failed << '\n';
      return failed ? kAssertion : kOk;
    }
    if (*generate) {
      std::cout << serialize_bundle(generate_instance(kind, seed, parse_caps(caps_spec)));
      return kOk;
    }
  } catch (const BundleError& e) {
    std::cerr << "bundle error: " << e.what() << '\n';
    return kInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const CapError& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kInput;
  }
  return kOk;
}
