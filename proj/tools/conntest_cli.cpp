#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "conntest/components.hpp"
#include "conntest/costs.hpp"
#include "conntest/errors.hpp"
#include "conntest/generators.hpp"
#include "conntest/hard_instance.hpp"
#include "conntest/harness.hpp"
#include "conntest/lower_bound.hpp"
#include "conntest/pbm.hpp"
#include "conntest/tester.hpp"
#include "conntest/verdict_json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace conntest;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitInternal = 3;

// Dyadic strings only, unless the caller opted into rounding.
Eps parse_eps(const std::string& text, bool normalize_eps) {
  try {
    return Eps::parse(text);
  } catch (const InvalidEps&) {
    if (!normalize_eps) throw;
  }
  double value = 0.0;
  const auto slash = text.find('/');
  try {
    value = slash == std::string::npos ? std::stod(text)
                                       : std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw InvalidEps("cannot read eps '" + text + "'");
  }
  if (!(value > 0.0 && value < 1.0)) throw InvalidEps("eps must lie in (0, 1), got '" + text + "'");
  return Eps::round_down(value);
}

Variant parse_variant(const std::string& s) {
  if (s == "adaptive") return Variant::Adaptive;
  if (s == "nonadaptive") return Variant::Nonadaptive;
  throw InvalidParams("variant must be adaptive or nonadaptive, got '" + s + "'");
}

PbmFormat parse_format(const std::string& s) {
  if (s == "p1" || s == "P1") return PbmFormat::Ascii;
  if (s == "p4" || s == "P4") return PbmFormat::Binary;
  throw InvalidParams("format must be p1 or p4");
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
}

fs::path sidecar_path(const fs::path& image) {
  auto p = image;
  p.replace_extension(".json");
  return p;
}

// Images come from a PBM file or from a procedural source.
struct SourceOptions {
  std::string image;
  int blank = 0;
  int comb = 0;
  int comb_period = 4;

  std::shared_ptr<const PixelSource> open() const {
    const int given = (!image.empty()) + (blank > 0) + (comb > 0);
    if (given != 1) throw InvalidParams("give exactly one of --image, --blank, --comb");
    if (!image.empty()) return make_source(read_pbm(fs::path(image)));
    if (blank > 0) return std::make_shared<BlankSource>(blank);
    return std::make_shared<CombSource>(comb, comb_period);
  }
  json describe() const {
    if (!image.empty()) return {{"kind", "pbm"}, {"path", image}};
    if (blank > 0) return {{"kind", "blank"}, {"side", blank}};
    return {{"kind", "comb"}, {"side", comb}, {"period", comb_period}};
  }
};

void add_source_options(CLI::App* cmd, SourceOptions& src) {
  cmd->add_option("--image", src.image, "PBM image (P1 or P4)");
  cmd->add_option("--blank", src.blank, "all-white procedural image of this side");
  cmd->add_option("--comb", src.comb, "procedural comb image of this side");
  cmd->add_option("--comb-period", src.comb_period, "column period of the comb")->check(CLI::PositiveNumber);
}

struct GenOptions {
  std::string kind;
  std::string family = "blob";
  int n = 0;
  std::string eps = "1/16";
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "p4";
  std::string certificate = "component";
  bool normalize_eps = false;
};

int cmd_gen(const GenOptions& o) {
  if (o.out.empty()) throw InvalidParams("--out is required");
  const auto format = parse_format(o.format);
  json side;
  Image img;
  if (o.kind == "connected") {
    const auto family = parse_family(o.family);
    img = gen_connected(o.n, family, o.seed);
    if (!is_connected(img)) throw InternalError("generator produced a disconnected image");
    side = {{"kind", "connected"}, {"family", to_string(family)}, {"n", o.n}, {"seed", o.seed}, {"connected", true}};
  } else if (o.kind == "dots") {
    const auto eps = parse_eps(o.eps, o.normalize_eps);
    FarCertificate cert;
    if (o.certificate == "component") {
      cert = FarCertificate::ComponentBound;
    } else if (o.certificate == "neighborhood") {
      cert = FarCertificate::NeighborhoodBound;
    } else {
      throw InvalidParams("certificate must be component or neighborhood");
    }
    auto d = gen_dot_far(o.n, eps.value(), o.seed, cert);
    img = std::move(d.image);
    side = {{"kind", "dots"},
            {"n", o.n},
            {"eps", eps.to_string()},
            {"seed", o.seed},
            {"dots", d.dots},
            {"spacing", d.spacing},
            {"certificate", o.certificate},
            {"distanceLowerBound", d.distance_lower_bound},
            {"certifiedFar", d.certified_far}};
  } else if (o.kind == "hard") {
    const auto params = make_hard_params(o.n, parse_eps(o.eps, o.normalize_eps));
    auto inst = sample_hard(params, o.seed);
    const auto audit = farness_audit(inst);
    side = to_json(inst);
    side["kind"] = "hard";
    side["farness"] = {{"componentCount", audit.component_count},
                       {"distanceLowerBound", audit.distance_lower_bound},
                       {"threshold", audit.threshold},
                       {"epsFar", audit.eps_far}};
    img = std::move(inst.image);
  } else {
    throw InvalidParams("unknown generator '" + o.kind + "' (connected, dots, hard)");
  }
  side["schemaVersion"] = kSchemaVersion;
  side["side"] = img.side();
  write_pbm(fs::path(o.out), img, format);
  write_json(side, sidecar_path(o.out).string());
  return 0;
}

struct TestOptions {
  SourceOptions source;
  std::string eps = "1/16";
  bool normalize_eps = false;
  std::string variant = "adaptive";
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  int threads = 0;
  bool no_verify = false;
  double budget_multiplier = 8.0;
  bool literal_fences = false;
  bool reject_after_closure = false;
  std::string out;
};

TesterConfig tester_config(const TestOptions& o) {
  TesterConfig config;
  config.variant = parse_variant(o.variant);
  config.budget_multiplier = o.budget_multiplier;
  config.diagonal.bfs_from_fence = !o.literal_fences;
  config.diagonal.reject_after_closure = o.reject_after_closure;
  return config;
}

int cmd_test(const TestOptions& o) {
  const auto eps = parse_eps(o.eps, o.normalize_eps);
  if (o.trials < 1) throw InvalidParams("--trials must be >= 1");
  TrialSpec spec;
  spec.source = o.source.open();
  spec.eps = eps.value();
  spec.config = tester_config(o);
  spec.root_seed = o.seed;
  spec.trials = o.trials;
  spec.threads = o.threads;
  spec.verify = !o.no_verify;
  const auto summary = run_trials(spec);

  json report = {{"schemaVersion", kSchemaVersion},
                 {"command", "test"},
                 {"source", o.source.describe()},
                 {"requestedEps", eps.to_string()},
                 {"variant", o.variant},
                 {"rootSeed", o.seed},
                 {"summary", to_json(summary)}};
  if (o.trials == 1) {
    // The single trial again with a full verdict; seeds match run_trials.
    auto oracle = open_instance(spec.source, spec.eps,
                                spec.config.variant == Variant::Adaptive ? OracleMode::Adaptive
                                                                         : OracleMode::Nonadaptive,
                                LogPolicy::CountOnly);
    TesterConfig config = spec.config;
    config.eps = oracle.normalization.eps;
    config.seed = derive_seed(o.seed, 0);
    report["verdict"] = to_json(test_connectedness(oracle.oracle, config));
  }
  report["timing"] = {{"wallSeconds", summary.wall_seconds}};
  write_json(report, o.out);
  if (spec.verify && summary.certificates_sound != summary.certificates_checked) {
    std::cerr << "unsound certificate in " << (summary.certificates_checked - summary.certificates_sound)
              << " rejection(s)\n";
    return kExitInternal;
  }
  return 0;
}

struct SweepOptions {
  std::vector<std::string> eps_list;
  bool normalize_eps = false;
  std::string variant = "adaptive";
  std::string family = "blank";
  int n = 0;
  std::uint64_t trials = 10;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
};

// Smallest 2^j + 1 that satisfies the premise at this eps.
int premise_side(Eps eps) {
  const double needed = 8.0 * std::pow(2.0, 1.5 * eps.log2_inverse());
  std::int64_t side = 2;
  while (static_cast<double>(side) < needed) side = 2 * (side - 1) + 1;
  if (side > (1 << 30)) throw InvalidParams("eps " + eps.to_string() + " needs a side beyond 2^30");
  return static_cast<int>(side);
}

std::shared_ptr<const PixelSource> sweep_source(const std::string& family, int side, Eps eps, std::uint64_t seed) {
  if (family == "blank") return std::make_shared<BlankSource>(side);
  if (family == "comb") return std::make_shared<CombSource>(side, 4);
  if (family == "dots") return make_source(gen_dot_far(side, eps.value(), seed).image);
  return make_source(gen_connected(side, parse_family(family), seed));
}

int cmd_sweep(const SweepOptions& o) {
  std::ostringstream csv;
  csv << "eps,side,meanQueries,maxQueries,rejectionRate,runtime\n";
  for (const auto& text : o.eps_list) {
    const auto eps = parse_eps(text, o.normalize_eps);
    const int side = o.n > 0 ? o.n : premise_side(eps);
    TrialSpec spec;
    spec.source = sweep_source(o.family, side, eps, o.seed);
    spec.eps = eps.value();
    spec.config.variant = parse_variant(o.variant);
    spec.root_seed = o.seed;
    spec.trials = o.trials;
    spec.threads = o.threads;
    spec.verify = true;
    const auto s = run_trials(spec);
    if (s.certificates_sound != s.certificates_checked) throw InternalError("unsound certificate during sweep");
    csv << s.eps.to_string() << ',' << s.padded_side << ',' << std::setprecision(10) << s.mean_queries << ','
        << s.max_queries << ',' << s.rejection_rate << ',' << std::setprecision(4) << s.wall_seconds << '\n';
  }
  if (o.out.empty() || o.out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(o.out);
    if (!out) throw IoError("cannot write " + o.out);
    out << csv.str();
  }
  return 0;
}

struct AuditOptions {
  std::string image;
  std::string eps = "1/16";
  bool normalize_eps = false;
  std::string provider = "dots";
  std::string out;
};

int cmd_audit(const AuditOptions& o) {
  const auto eps = parse_eps(o.eps, o.normalize_eps);
  const Image img = read_pbm(fs::path(o.image));
  std::unique_ptr<CostProvider> provider;
  if (o.provider == "dots") {
    provider = std::make_unique<DotCostProvider>();
  } else if (o.provider == "brute") {
    provider = std::make_unique<BruteForceCostProvider>();
  } else {
    throw InvalidParams("provider must be dots or brute");
  }
  const auto report = structural_audit(img, eps, *provider);
  const auto far = farness_audit(img, eps, img.side());
  write_json({{"schemaVersion", kSchemaVersion},
              {"command", "audit"},
              {"image", o.image},
              {"eps", eps.to_string()},
              {"structural",
               {{"perLevelSums", report.per_level_sums},
                {"grandTotal", report.grand_total},
                {"threshold", report.threshold},
                {"passed", report.passed},
                {"nearThreshold", report.near_threshold}}},
              {"farness",
               {{"componentCount", far.component_count},
                {"distanceLowerBound", far.distance_lower_bound},
                {"threshold", far.threshold},
                {"epsFar", far.eps_far}}}},
             o.out);
  return 0;
}

struct LowerBoundOptions {
  int n = 512;
  std::string eps = "2^-16";
  std::string strategy = "uniform";
  std::optional<std::uint64_t> q;
  double c = 1.0 / 64;
  std::string queries;
  std::uint64_t mc_trials = 100000;
  std::uint64_t seed = 0;
  bool threshold = false;
  std::string out;
};

int cmd_lowerbound(const LowerBoundOptions& o) {
  const auto params = make_hard_params(o.n, Eps::parse(o.eps));
  const std::uint64_t q = o.q.value_or(claim5_budget(params, o.c));
  std::function<QueryStrategy(std::uint64_t)> make;
  if (o.strategy == "uniform") {
    make = [&](std::uint64_t k) { return uniform_strategy(params, k, o.seed); };
  } else if (o.strategy == "bridge-focused") {
    make = [&](std::uint64_t k) { return bridge_focused_strategy(params, k, o.seed); };
  } else if (o.strategy == "grid-focused") {
    make = [&](std::uint64_t k) { return grid_focused_strategy(params, k, o.seed); };
  } else if (o.strategy == "full-bridge") {
    make = [&](std::uint64_t) { return full_bridge_square_strategy(params); };
  } else if (o.strategy == "file") {
    if (o.queries.empty()) throw InvalidParams("--queries is required for the file strategy");
    make = [&](std::uint64_t) { return read_strategy_file(o.queries, params); };
  } else {
    throw InvalidParams("unknown strategy '" + o.strategy + "'");
  }
  const auto started = std::chrono::steady_clock::now();
  const auto strategy = make(q);
  const double exact = revealing_probability_exact(strategy, params);
  json report = {{"schemaVersion", kSchemaVersion},
                 {"command", "lowerbound"},
                 {"params", to_json(params)},
                 {"strategy", strategy.name},
                 {"seed", o.seed},
                 {"q", strategy.size()},
                 {"exactProbability", exact}};
  if (o.mc_trials > 0) {
    const auto mc = revealing_probability_mc(strategy, params, o.mc_trials, o.seed);
    report["monteCarlo"] = {{"estimate", mc.estimate}, {"stderr", mc.stderr_}, {"trials", mc.trials},
                            {"hits", mc.hits}};
  }
  const auto stats = classify_windows(strategy, params);
  report["windowStats"] = to_json(stats);
  report["claim4Holds"] = stats.all_hold();
  if (o.threshold && o.strategy != "file" && o.strategy != "full-bridge") {
    const auto th = find_threshold(make, params, static_cast<std::uint64_t>(params.n) * params.n);
    report["threshold"] = {{"reached", th.reached}, {"qStar", th.q_star}, {"cStar", th.c_star},
                           {"probability", th.probability}};
  }
  report["timing"] = {
      {"wallSeconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()}};
  write_json(report, o.out);
  return 0;
}

struct OracleOptions {
  std::string image;
  std::string property = "border";
};

int cmd_oracle(const OracleOptions& o) {
  const Image img = read_pbm(fs::path(o.image));
  json report = {{"schemaVersion", kSchemaVersion}, {"command", "oracle"}, {"side", img.side()}};
  if (o.property == "border") {
    report["property"] = "border-connected";
    report["distance"] = exact_dist_border_connected(img);
  } else if (o.property == "connected") {
    report["property"] = "connected";
    report["distance"] = exact_dist_connected(img);
    report["componentCount"] = connected_components(img).component_count;
  } else {
    throw InvalidParams("property must be border or connected");
  }
  write_json(report, "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sublinear connectedness testers for binary images"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* g = app.add_subcommand("gen", "generate an image (PBM) and its JSON sidecar");
  g->add_option("kind", gen.kind, "connected, dots or hard")->required();
  g->add_option("--family", gen.family, "blob, rectangles or serpentine");
  g->add_option("--n", gen.n, "image side")->required();
  g->add_option("--eps", gen.eps, "proximity parameter, e.g. 1/16 or 2^-16");
  g->add_flag("--normalize", gen.normalize_eps, "round a non-dyadic eps down");
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "output PBM path; the sidecar goes next to it")->required();
  g->add_option("--format", gen.format, "p1 or p4");
  g->add_option("--certificate", gen.certificate, "dots only: component or neighborhood");

  TestOptions test;
  auto* t = app.add_subcommand("test", "run a tester on one image");
  add_source_options(t, test.source);
  t->add_option("--eps", test.eps);
  t->add_flag("--normalize", test.normalize_eps, "round a non-dyadic eps down");
  t->add_option("--variant", test.variant, "adaptive or nonadaptive");
  t->add_option("--trials", test.trials);
  t->add_option("--seed", test.seed, "root seed; trial i uses a seed derived from it");
  t->add_option("--threads", test.threads, "0 = all cores");
  t->add_flag("--no-verify", test.no_verify, "skip certificate checks");
  t->add_option("--budget-multiplier", test.budget_multiplier, "adaptive query budget over the expected cost");
  t->add_flag("--literal-fences", test.literal_fences, "do not start searches from black B-fence pixels");
  t->add_flag("--reject-after-closure", test.reject_after_closure, "reject on black A-fence pixels right away");
  t->add_option("--out", test.out, "JSON report path (default stdout)");

  SweepOptions sweep;
  auto* s = app.add_subcommand("sweep", "mean query counts across eps values (CSV)");
  s->add_option("--eps-list", sweep.eps_list, "comma-separated eps values")->delimiter(',');
  s->add_flag("--normalize", sweep.normalize_eps);
  s->add_option("--variant", sweep.variant);
  s->add_option("--family", sweep.family, "blank, comb, dots, blob, rectangles or serpentine");
  s->add_option("--n", sweep.n, "image side (default: smallest side meeting the premise)");
  s->add_option("--trials", sweep.trials);
  s->add_option("--seed", sweep.seed);
  s->add_option("--threads", sweep.threads);
  s->add_option("--out", sweep.out, "CSV path (default stdout)");

  AuditOptions audit;
  auto* a = app.add_subcommand("audit", "structural and farness audits of an image");
  a->add_option("--image", audit.image)->required();
  a->add_option("--eps", audit.eps);
  a->add_flag("--normalize", audit.normalize_eps);
  a->add_option("--provider", audit.provider, "dots or brute");
  a->add_option("--out", audit.out);

  LowerBoundOptions lb;
  auto* l = app.add_subcommand("lowerbound", "play a query strategy against the hard distribution");
  l->add_option("--n", lb.n);
  l->add_option("--eps", lb.eps);
  l->add_option("--strategy", lb.strategy, "uniform, bridge-focused, grid-focused, full-bridge or file");
  l->add_option("--q", lb.q, "number of queries (default: c (1/eps) log(1/eps))");
  l->add_option("--c", lb.c);
  l->add_option("--queries", lb.queries, "file of 'x y' pairs for the file strategy");
  l->add_option("--mc-trials", lb.mc_trials, "0 skips the Monte Carlo estimate");
  l->add_option("--seed", lb.seed);
  l->add_flag("--threshold", lb.threshold, "also search for the smallest q with Pr[E] >= 1/3");
  l->add_option("--out", lb.out);

  OracleOptions oracle;
  auto* o = app.add_subcommand("oracle", "exact distance of a tiny image by brute force");
  o->add_option("--image", oracle.image)->required();
  o->add_option("--property", oracle.property, "border or connected");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*t) return cmd_test(test);
    if (*s) return cmd_sweep(sweep);
    if (*a) return cmd_audit(audit);
    if (*l) return cmd_lowerbound(lb);
    if (*o) return cmd_oracle(oracle);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return e.is_internal() ? kExitInternal : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
