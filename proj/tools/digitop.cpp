// digitop command-line front end.
//
// Exit codes: 0 true / success, 1 false / not confirmed / exhausted, 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "digitop/digitop.hpp"

namespace {

using namespace digitop;
using json = nlohmann::json;

constexpr int kTrue = 0;
constexpr int kFalse = 1;
constexpr int kInputError = 2;

struct RunConfig {
  std::string image_path, map_path, map2_path, weights_path, fn_path, metric_name;
  std::string kind;
  std::vector<std::string> claims;
  std::string out_path;
  std::string format = "json";
  std::string registry_path = default_registry_path();
  std::string schema_path;
  std::uint64_t budget = default_budget();
  unsigned parallel = 1;
  double tau = kDefaultTau;
};

void require_config(const RunConfig& cfg) {
  if (cfg.budget == 0) throw ContractError("budget must be positive");
  if (cfg.parallel == 0) throw ContractError("parallelism must be at least 1");
  if (!(cfg.tau > 0)) throw ContractError("tau must be positive");
}

std::string adjacency_name(const DigitalImage& image) { return "c_" + std::to_string(image.adjacency().u); }

int cmd_validate(const RunConfig& cfg) {
  const auto spec = io::image_from_json(io::load_json_file(cfg.image_path));
  const auto& image = *spec.image;
  const bool connected = is_connected(image);
  if (spec.metric && spec.metric->kind == MetricKind::ShortestPath && !connected)
    throw ParseError("shortest_path metric requested on a disconnected image");
  if (spec.metric) MetricSpace(spec.image, *spec.metric, cfg.tau);
  std::cout << "OK: " << image.size() << " points, " << adjacency_name(image) << ", "
            << (connected ? "connected" : "disconnected (" + std::to_string(connected_components(image).size()) +
                                              " components)")
            << "\n";
  return kTrue;
}

MetricSpec resolve_metric(const RunConfig& cfg, const io::ImageSpec& spec) {
  if (!cfg.metric_name.empty()) {
    const auto m = metric_from_name(cfg.metric_name);
    if (!m) throw ParseError("unknown metric \"" + cfg.metric_name + "\"");
    return *m;
  }
  return spec.metric.value_or(MetricSpec::l2());
}

void print_pair(const DigitalImage& image, const std::optional<IndexPair>& p) {
  if (p) std::cout << "witness: x = " << to_string(image.point(p->first)) << ", y = " << to_string(image.point(p->second)) << "\n";
}

int verdict(bool holds, const std::string& what) {
  std::cout << what << ": " << (holds ? "true" : "false") << "\n";
  return holds ? kTrue : kFalse;
}

int cmd_check(const RunConfig& cfg) {
  const auto spec = io::image_from_json(io::load_json_file(cfg.image_path));
  const auto& image = *spec.image;
  const auto f = io::map_from_json(io::load_json_file(cfg.map_path), spec.image);
  const auto& kind = cfg.kind;
  auto space = [&] { return MetricSpace(spec.image, resolve_metric(cfg, spec), cfg.tau); };
  auto second = [&] {
    if (cfg.map2_path.empty()) throw ParseError("check " + kind + " needs --map2");
    return io::map_from_json(io::load_json_file(cfg.map2_path), spec.image);
  };

  if (kind == "continuity") {
    const bool holds = is_continuous_adjacency(image, f);
    if (!holds)
      for (std::size_t i = 0; i < image.size(); ++i)
        for (auto j : image.neighbor_indices(i))
          if (!image.adjacent_or_equal(f[i], f[j])) {
            print_pair(image, IndexPair{i, j});
            return verdict(false, "continuous (" + adjacency_name(image) + ")");
          }
    return verdict(holds, "continuous (" + adjacency_name(image) + ")");
  }
  if (kind == "contraction") {
    const auto s = space();
    const auto v = contraction_modulus(f, s);
    std::cout << "modulus k* = " << v.modulus.display() << "\n";
    return verdict(v.is_contraction, "contraction");
  }
  if (kind == "geraghty") {
    const auto s = space();
    const auto v = is_geraghty(f, s);
    print_pair(image, v.failing_pair);
    return verdict(v.holds, "geraghty");
  }
  if (kind == "wus") {
    const auto s = space();
    const auto v = is_wus_contraction(f, s);
    if (!v.holds && v.failing_epsilon) std::cout << "epsilon = " << v.failing_epsilon->display() << "\n";
    print_pair(image, v.failing_pair);
    return verdict(v.holds, "wus");
  }
  if (kind == "expansive") {
    const auto s = space();
    const auto v = is_expansive(f, s);
    print_pair(image, v.failing_pair);
    return verdict(v.holds, "expansive");
  }
  if (kind == "alpha-psi-expansive") {
    if (cfg.weights_path.empty() || cfg.fn_path.empty()) throw ParseError("alpha-psi-expansive needs --weights and --fn");
    const auto s = space();
    const auto alpha = io::weights_from_json(io::load_json_file(cfg.weights_path), spec.image);
    const auto psi = io::closed_form_from_json(io::load_json_file(cfg.fn_path));
    const auto v = is_alpha_psi_expansive(f, alpha, psi, s);
    print_pair(image, v.failing_pair);
    return verdict(v.holds, "alpha-psi expansive");
  }
  if (kind == "alpha-admissible") {
    if (cfg.weights_path.empty()) throw ParseError("alpha-admissible needs --weights");
    const auto alpha = io::weights_from_json(io::load_json_file(cfg.weights_path), spec.image);
    const auto v = is_alpha_admissible(f, alpha);
    print_pair(image, v.failing_pair);
    return verdict(v.holds, "alpha-admissible");
  }
  if (kind == "compatible" || kind == "compatible-k" || kind == "compatible-r" || kind == "chauhan") {
    const auto s = space();
    const MapPair p(f, second());
    bool holds = false;
    if (kind == "compatible") holds = is_compatible(p, s);
    else if (kind == "compatible-k") holds = is_compatible_type_k(p, s);
    else if (kind == "compatible-r") holds = is_compatible_type_r(p, s);
    else holds = is_pointwise_compatible_chauhan(p, s);
    if (!holds && kind != "chauhan") {
      const auto c = coincidence_points(p);
      std::cout << "coincidence points:";
      for (auto x : c.points) std::cout << " " << to_string(image.point(x));
      std::cout << "\n";
    }
    return verdict(holds, kind);
  }
  throw ParseError("unknown check kind \"" + kind + "\"");
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

int cmd_audit(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "md") throw ParseError("--format must be json or md");
  const auto registry = load_registry_file(cfg.registry_path);
  const AuditContext ctx{cfg.budget, cfg.tau, cfg.parallel};
  const auto report = run_registry(registry, cfg.claims, ctx);
  write_output(cfg.out_path, cfg.format == "json" ? report_to_json(report).dump(2) + "\n" : report_to_markdown(report));
  if (!cfg.out_path.empty())
    std::cerr << report.summary.matched << "/" << report.summary.total << " claims matched\n";
  return report.ok() ? kTrue : kFalse;
}

int cmd_falsify(const RunConfig& cfg) {
  const auto schema = schema_from_json(io::load_json_file(cfg.schema_path));
  const auto result = falsify(schema, {cfg.budget, cfg.parallel, cfg.tau});
  std::cout << falsify_result_to_json(result).dump(2) << "\n";
  return result.witness ? kTrue : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital topology fixed-point toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--tau", cfg.tau, "Tolerance for mixed real arithmetic");
  app.add_option("--budget", cfg.budget, "Enumeration budget (env DIGITOP_BUDGET)");

  auto* validate = app.add_subcommand("validate", "Parse and check an image file");
  validate->add_option("image", cfg.image_path, "Image spec (JSON)")->required();

  auto* check = app.add_subcommand("check", "Run one classifier on a map");
  check->add_option("kind", cfg.kind,
                    "continuity | contraction | geraghty | wus | expansive | compatible | compatible-k | "
                    "compatible-r | chauhan | alpha-psi-expansive | alpha-admissible")
      ->required();
  check->add_option("--image", cfg.image_path)->required();
  check->add_option("--map", cfg.map_path)->required();
  check->add_option("--map2", cfg.map2_path);
  check->add_option("--metric", cfg.metric_name, "l1 | l2 | linf | shortest_path");
  check->add_option("--weights", cfg.weights_path);
  check->add_option("--fn", cfg.fn_path);

  auto* audit = app.add_subcommand("audit", "Claims registry");
  audit->require_subcommand(1);
  auto* run = audit->add_subcommand("run", "Run the registry");
  run->add_option("--claim", cfg.claims, "Restrict to a claim id (repeatable)");
  run->add_option("--out", cfg.out_path);
  run->add_option("--format", cfg.format, "json | md");
  run->add_option("--registry", cfg.registry_path);
  run->add_option("--parallel", cfg.parallel);

  auto* fals = app.add_subcommand("falsify", "Search for a counterexample to a schema");
  fals->add_option("--schema", cfg.schema_path)->required();
  fals->add_option("--budget", cfg.budget);
  fals->add_option("--parallel", cfg.parallel);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    require_config(cfg);
    if (*validate) return cmd_validate(cfg);
    if (*check) return cmd_check(cfg);
    if (*run) return cmd_audit(cfg);
    if (*fals) return cmd_falsify(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
