// Command-line front end: every verification is a reproducible run that
// echoes its configuration (seed, tolerances) and emits text, JSON, or CSV.
//
// Exit codes: 0 success, 1 expected-property violation, 2 numerical
// instability, 64 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "json_writer.hpp"
#include "tightlag/errors.hpp"
#include "tightlag/intgeo.hpp"
#include "tightlag/killing.hpp"
#include "tightlag/surface_json.hpp"

namespace {

using namespace tightlag;
using tightlag::cli::JsonObject;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUnstable = 2;
constexpr int kExitUsage = 64;

struct CommonOptions {
  std::string surface = "m0";
  std::uint64_t seed = 12345;
  long long samples = 0;  // per-command default applied later
  int resolution = 0;
  double tol = 1e-8;
  double epsilon = 0.05;
  std::string regime = "global";
  bool expect_tight = false;
  std::string format = "text";
  std::string out;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool with_surface = true) {
  if (with_surface) {
    cmd->add_option("--surface", opt.surface, "m0 | torus:a,b | param:path");
  }
  cmd->add_option("--seed", opt.seed, "random seed (reproducible runs)");
  cmd->add_option("--samples", opt.samples, "sample / trial count");
  cmd->add_option("--resolution", opt.resolution, "grid or mesh resolution");
  cmd->add_option("--tol", opt.tol, "numeric tolerance");
  cmd->add_option("--epsilon", opt.epsilon, "local-regime flow bound");
  cmd->add_option("--format", opt.format, "text | json | csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--out", opt.out, "write the report to a file instead of stdout");
}

LagrangianSurface parse_surface(const std::string& spec) {
  if (spec == "m0") return LagrangianSurface::anti_diagonal_sphere();
  if (spec.rfind("torus:", 0) == 0) {
    const std::string args = spec.substr(6);
    const auto comma = args.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("surface spec: expected torus:a,b");
    }
    return LagrangianSurface::latitude_torus(std::stod(args.substr(0, comma)),
                                             std::stod(args.substr(comma + 1)));
  }
  if (spec.rfind("param:", 0) == 0) return load_surface_json_file(spec.substr(6));
  throw std::invalid_argument("surface spec: expected m0 | torus:a,b | param:path");
}

void emit(const CommonOptions& opt, const std::string& payload) {
  if (opt.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream file(opt.out);
  if (!file) throw std::invalid_argument("cannot open output file '" + opt.out + "'");
  file << payload;
}

std::string text_line(const std::string& key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return key + ": " + buf + "\n";
}

int run_nullity(const CommonOptions& opt) {
  const LagrangianSurface surface = parse_surface(opt.surface);
  const int n_points = opt.samples > 0 ? static_cast<int>(opt.samples) : 200;
  const NullityReport report = killing_nullity(surface, n_points, opt.tol);

  int bound_min = 99, bound_max = 0;
  for (const auto& cp : sample_params(surface, 50, opt.seed)) {
    const int b = gotoh_bound(surface, cp);
    bound_min = std::min(bound_min, b);
    bound_max = std::max(bound_max, b);
  }

  if (opt.format == "json") {
    JsonObject obj;
    obj.str("command", "nullity")
        .str("surface", opt.surface)
        .integer("seed", static_cast<long long>(opt.seed))
        .integer("n_points", n_points)
        .num("tolerance", opt.tol)
        .integer("nullity", report.rank)
        .boolean("rank_stable", report.stable)
        .integers("rank_by_tolerance",
                  {report.rank_by_tolerance[0], report.rank_by_tolerance[1],
                   report.rank_by_tolerance[2]})
        .numbers("tolerances", {report.tolerances[0], report.tolerances[1],
                                report.tolerances[2]})
        .numbers("singular_values", report.singular_values)
        .integer("gotoh_bound_min", bound_min)
        .integer("gotoh_bound_max", bound_max);
    emit(opt, obj.dump());
  } else {
    std::ostringstream text;
    text << "surface: " << opt.surface << "\n"
         << "nullity: " << report.rank << "\n"
         << "rank stable across tolerance decades: " << (report.stable ? "yes" : "no") << "\n";
    text << "ranks at [" << report.tolerances[0] << ", " << report.tolerances[1] << ", "
         << report.tolerances[2] << "]: " << report.rank_by_tolerance[0] << ", "
         << report.rank_by_tolerance[1] << ", " << report.rank_by_tolerance[2] << "\n";
    text << "singular values:";
    for (const double s : report.singular_values) text << " " << s;
    text << "\n"
         << "pointwise bound over 50 samples: min " << bound_min << ", max " << bound_max
         << "\n";
    emit(opt, text.str());
  }
  return report.stable ? kExitOk : kExitUnstable;
}

int run_gotoh(const CommonOptions& opt) {
  const LagrangianSurface surface = parse_surface(opt.surface);
  const int n = opt.samples > 0 ? static_cast<int>(opt.samples) : 200;
  std::map<int, long long> histogram;
  int max_bound = 0;
  for (const auto& cp : sample_params(surface, n, opt.seed)) {
    const int b = gotoh_bound(surface, cp);
    ++histogram[b];
    max_bound = std::max(max_bound, b);
  }
  const NullityReport nullity = killing_nullity(surface, 200, opt.tol);

  if (opt.format == "json") {
    JsonObject obj;
    obj.str("command", "gotoh")
        .str("surface", opt.surface)
        .integer("seed", static_cast<long long>(opt.seed))
        .integer("n_points", n)
        .integer("nullity", nullity.rank)
        .integer("max_pointwise_bound", max_bound)
        .boolean("inequality_holds", nullity.rank >= max_bound);
    std::string hist = "{";
    for (auto it = histogram.begin(); it != histogram.end(); ++it) {
      hist += "\"" + std::to_string(it->first) + "\": " + std::to_string(it->second);
      if (std::next(it) != histogram.end()) hist += ", ";
    }
    obj.raw("bound_histogram", hist + "}");
    emit(opt, obj.dump());
  } else {
    std::ostringstream text;
    text << "surface: " << opt.surface << "\nnullity: " << nullity.rank << "\n";
    for (const auto& [bound, count] : histogram) {
      text << "bound " << bound << ": " << count << " points\n";
    }
    text << "nullity >= max bound: " << (nullity.rank >= max_bound ? "yes" : "no") << "\n";
    emit(opt, text.str());
  }
  if (!nullity.stable) return kExitUnstable;
  return nullity.rank >= max_bound ? kExitOk : kExitViolation;
}

int run_kahler_scan(const CommonOptions& opt) {
  const int resolution = opt.resolution > 0 ? opt.resolution : 64;
  const auto rows = scan_fundamental_domain(resolution);
  if (opt.format == "json") {
    std::ostringstream out;
    out << "{\n  \"command\": \"kahler-scan\",\n  \"resolution\": " << resolution
        << ",\n  \"rows\": [\n";
    char buf[96];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "    [%.17g, %.17g, %d]%s", rows[i].sum, rows[i].diff,
                    rows[i].dim_im_psi2, i + 1 < rows.size() ? ",\n" : "\n");
      out << buf;
    }
    out << "  ]\n}\n";
    emit(opt, out.str());
  } else {
    std::ostringstream out;
    write_scan_csv(rows, out);
    emit(opt, out.str());
  }
  return kExitOk;
}

int run_poincare(const CommonOptions& opt) {
  const LagrangianSurface surface = parse_surface(opt.surface);
  const long long n = opt.samples > 0 ? opt.samples : 100000;
  const MonteCarloEstimate est = poincare_mc(surface, n, opt.seed);
  if (opt.format == "json") {
    JsonObject obj;
    obj.str("command", "poincare")
        .str("surface", opt.surface)
        .integer("seed", static_cast<long long>(est.seed))
        .integer("samples", est.n_samples)
        .integer("degenerate_draws", est.degenerate_draws)
        .num("mean", est.mean)
        .num("std_error", est.std_error)
        .num("vol_g", vol_g());
    emit(opt, obj.dump());
  } else {
    std::ostringstream text;
    text << "surface: " << opt.surface << "\nsamples: " << est.n_samples
         << " (degenerate discarded: " << est.degenerate_draws << ")\nseed: " << est.seed
         << "\n"
         << text_line("mean", est.mean) << text_line("std_error", est.std_error)
         << text_line("vol_g", vol_g());
    emit(opt, text.str());
  }
  return kExitOk;
}

int run_intersect(const CommonOptions& opt, const std::string& replay_path) {
  const LagrangianSurface surface = parse_surface(opt.surface);
  const int mesh = opt.resolution > 0 ? opt.resolution : 48;

  if (!replay_path.empty()) {
    std::ifstream in(replay_path);
    if (!in) throw std::invalid_argument("cannot open replay file '" + replay_path + "'");
    const auto violations = read_violations_json(in);
    long long mismatches = 0;
    std::ostringstream text;
    for (std::size_t i = 0; i < violations.size(); ++i) {
      const IntersectionReport rep = count_intersection(surface, violations[i].g, mesh);
      const bool match = !rep.degenerate && rep.count() == violations[i].count;
      if (!match) ++mismatches;
      text << "entry " << i << ": recorded " << violations[i].count << ", replayed "
           << rep.count() << (match ? " (match)" : " (MISMATCH)") << "\n";
    }
    if (opt.format == "json") {
      JsonObject obj;
      obj.str("command", "intersect-replay")
          .str("surface", opt.surface)
          .str("replay", replay_path)
          .integer("entries", static_cast<long long>(violations.size()))
          .integer("mismatches", mismatches);
      emit(opt, obj.dump());
    } else {
      text << "entries: " << violations.size() << ", mismatches: " << mismatches << "\n";
      emit(opt, text.str());
    }
    return mismatches == 0 ? kExitOk : kExitViolation;
  }

  const long long n = opt.samples > 0 ? opt.samples : 100;
  RngStream rng(opt.seed);
  std::map<int, long long> histogram;
  long long degenerate = 0, non_transverse = 0;
  for (long long i = 0; i < n; ++i) {
    const IntersectionReport rep = count_intersection(surface, haar_sample(rng), mesh);
    if (rep.degenerate) {
      ++degenerate;
      continue;
    }
    if (!rep.transverse) ++non_transverse;
    ++histogram[rep.count()];
  }
  if (opt.format == "json") {
    JsonObject obj;
    obj.str("command", "intersect")
        .str("surface", opt.surface)
        .integer("seed", static_cast<long long>(opt.seed))
        .integer("samples", n)
        .integer("degenerate", degenerate)
        .integer("non_transverse", non_transverse);
    std::string hist = "{";
    for (auto it = histogram.begin(); it != histogram.end(); ++it) {
      hist += "\"" + std::to_string(it->first) + "\": " + std::to_string(it->second);
      if (std::next(it) != histogram.end()) hist += ", ";
    }
    obj.raw("count_histogram", hist + "}");
    emit(opt, obj.dump());
  } else {
    std::ostringstream text;
    text << "surface: " << opt.surface << "\nseed: " << opt.seed << "\nsamples: " << n
         << "\ndegenerate draws: " << degenerate << "\n";
    for (const auto& [count, times] : histogram) {
      text << "count " << count << ": " << times << " draws\n";
    }
    emit(opt, text.str());
  }
  return kExitOk;
}

int run_tightness(const CommonOptions& opt) {
  const LagrangianSurface surface = parse_surface(opt.surface);
  const long long n = opt.samples > 0 ? opt.samples : 10000;
  const TightnessRegime regime =
      opt.regime == "local" ? TightnessRegime::kLocal : TightnessRegime::kGlobal;
  const TightnessVerdict verdict = tightness_check(surface, regime, n, opt.epsilon, opt.seed);

  std::string violations_path;
  if (!verdict.violations.empty()) {
    violations_path = opt.out.empty() ? "tightlag_violations.json" : opt.out + ".violations.json";
    std::ofstream file(violations_path);
    write_violations_json(verdict, file);
  }

  if (opt.format == "json") {
    JsonObject obj;
    obj.str("command", "tightness")
        .str("surface", opt.surface)
        .str("regime", opt.regime)
        .integer("seed", static_cast<long long>(verdict.seed))
        .integer("trials", verdict.trials)
        .integer("transverse_trials", verdict.transverse_trials)
        .num("epsilon", verdict.epsilon)
        .integer("expected_count", verdict.expected_count)
        .integer("violations", static_cast<long long>(verdict.violations.size()))
        .str("violations_file", violations_path)
        .boolean("passed", verdict.passed());
    emit(opt, obj.dump());
  } else {
    std::ostringstream text;
    text << "surface: " << opt.surface << "\nregime: " << opt.regime
         << "\nseed: " << verdict.seed << "\ntrials: " << verdict.trials << " (transverse "
         << verdict.transverse_trials << ")\nexpected count: " << verdict.expected_count
         << "\nviolations: " << verdict.violations.size() << "\n";
    if (regime == TightnessRegime::kLocal) text << "epsilon: " << verdict.epsilon << "\n";
    if (!violations_path.empty()) text << "violations file: " << violations_path << "\n";
    text << (verdict.passed() ? "tight over all transverse trials\n"
                              : "NOT tight: counterexamples recorded\n");
    emit(opt, text.str());
  }
  return (opt.expect_tight && !verdict.passed()) ? kExitViolation : kExitOk;
}

int run_morse(const CommonOptions& opt) {
  const LagrangianSurface surface = parse_surface(opt.surface);
  const long long n_fields = opt.samples > 0 ? opt.samples : 20;
  const int mesh = opt.resolution > 0 ? opt.resolution : 128;
  RngStream rng(opt.seed);
  std::map<int, long long> histogram;
  long long degenerate_fields = 0;
  for (long long i = 0; i < n_fields; ++i) {
    Eigen::Vector3d a(rng.normal(), rng.normal(), rng.normal());
    Eigen::Vector3d b(rng.normal(), rng.normal(), rng.normal());
    const KillingField field{ProductAlgebraElement(a, b)};
    const MorseCount mc = morse_count(field, surface, mesh);  // throws on mismatch
    if (!mc.all_nondegenerate) {
      ++degenerate_fields;
      continue;
    }
    ++histogram[mc.count];
  }
  const int expected = sb_z2(surface.topology_kind());

  bool all_match = true;
  for (const auto& [count, times] : histogram) all_match &= count == expected;

  if (opt.format == "json") {
    JsonObject obj;
    obj.str("command", "morse")
        .str("surface", opt.surface)
        .integer("seed", static_cast<long long>(opt.seed))
        .integer("fields", n_fields)
        .integer("mesh_resolution", mesh)
        .integer("expected_betti_sum", expected)
        .integer("degenerate_fields", degenerate_fields)
        .boolean("counts_match_betti_sum", all_match);
    std::string hist = "{";
    for (auto it = histogram.begin(); it != histogram.end(); ++it) {
      hist += "\"" + std::to_string(it->first) + "\": " + std::to_string(it->second);
      if (std::next(it) != histogram.end()) hist += ", ";
    }
    obj.raw("count_histogram", hist + "}");
    emit(opt, obj.dump());
  } else {
    std::ostringstream text;
    text << "surface: " << opt.surface << "\nseed: " << opt.seed << "\nfields: " << n_fields
         << " (degenerate skipped: " << degenerate_fields << ")\n";
    for (const auto& [count, times] : histogram) {
      text << "count " << count << ": " << times << " fields\n";
    }
    text << "expected Betti sum: " << expected << "\n";
    emit(opt, text.str());
  }
  return all_match ? kExitOk : kExitViolation;
}

int run_check_lagrangian(const CommonOptions& opt) {
  const LagrangianSurface surface = parse_surface(opt.surface);
  const int n = opt.samples > 0 ? static_cast<int>(opt.samples) : 400;
  const bool lagrangian = check_lagrangian(surface, n, opt.tol);
  if (opt.format == "json") {
    JsonObject obj;
    obj.str("command", "check-lagrangian")
        .str("surface", opt.surface)
        .integer("samples", n)
        .num("tolerance", opt.tol)
        .boolean("lagrangian", lagrangian);
    emit(opt, obj.dump());
  } else {
    std::ostringstream text;
    text << "surface: " << opt.surface << "\nsamples: " << n << "\ntolerance: " << opt.tol
         << "\nlagrangian: " << (lagrangian ? "true" : "false") << "\n";
    emit(opt, text.str());
  }
  return lagrangian ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for Lagrangian surfaces in the product of two spheres"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string replay_path;

  CLI::App* nullity = app.add_subcommand("nullity", "Killing nullity with rank diagnostics");
  add_common_flags(nullity, opt);
  CLI::App* gotoh = app.add_subcommand("gotoh", "pointwise nullity lower bound");
  add_common_flags(gotoh, opt);
  CLI::App* scan = app.add_subcommand("kahler-scan", "angle-invariant grid over the orbit space");
  add_common_flags(scan, opt, false);
  CLI::App* intersect = app.add_subcommand("intersect", "intersection counts under isometries");
  add_common_flags(intersect, opt);
  intersect->add_option("--replay", replay_path, "recount a violations file");
  CLI::App* poincare = app.add_subcommand("poincare", "Haar Monte Carlo intersection integral");
  add_common_flags(poincare, opt);
  CLI::App* tightness = app.add_subcommand("tightness", "tightness spot checks with replay");
  add_common_flags(tightness, opt);
  tightness->add_option("--regime", opt.regime, "local | global")
      ->check(CLI::IsMember({"local", "global"}));
  tightness->add_flag("--expect-tight", opt.expect_tight,
                      "exit 1 if any violation is found");
  CLI::App* morse = app.add_subcommand("morse", "critical points vs normal-field zeros");
  add_common_flags(morse, opt);
  CLI::App* check = app.add_subcommand("check-lagrangian", "sampled Lagrangian verification");
  add_common_flags(check, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(nullity)) return run_nullity(opt);
    if (app.got_subcommand(gotoh)) return run_gotoh(opt);
    if (app.got_subcommand(scan)) return run_kahler_scan(opt);
    if (app.got_subcommand(intersect)) return run_intersect(opt, replay_path);
    if (app.got_subcommand(poincare)) return run_poincare(opt);
    if (app.got_subcommand(tightness)) return run_tightness(opt);
    if (app.got_subcommand(morse)) return run_morse(opt);
    if (app.got_subcommand(check)) return run_check_lagrangian(opt);
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitViolation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical instability: " << e.what() << "\n";
    return kExitUnstable;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUnstable;
  }
  return kExitUsage;
}
