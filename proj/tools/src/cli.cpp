#include "cuspsieve_cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "cuspsieve/cusps.hpp"
#include "cuspsieve/enveloping_sieve.hpp"
#include "cuspsieve/errors.hpp"
#include "cuspsieve/estimates.hpp"
#include "cuspsieve/exp_sums.hpp"
#include "cuspsieve/parallel.hpp"
#include "cuspsieve/transference.hpp"
#include "cuspsieve_cli/json_io.hpp"

namespace cuspsieve::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to a file or, for "-", to the given stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
    os_ = file_.get();
  }
  std::ostream& operator*() { return *os_; }
  void close(const std::string& path) {
    if (file_) {
      file_->close();
      if (!*file_) throw std::runtime_error("write failed for " + path);
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void require_format(const RunConfig& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (c.format == f) return;
  std::string msg = "--format " + c.format + " is not available for " + c.command + " (use";
  for (const char* f : allowed) msg += std::string(" ") + f;
  throw UsageError(msg + ")");
}

json header(const RunConfig& c) {
  return json{{"schema", 1}, {"command", c.command}, {"seed", c.seed}};
}

PrimeSubset make_subset(const PrimeContext& ctx, const RunConfig& c, double lower) {
  if (c.subset == "full") return subset_full(ctx, c.N, lower);
  if (c.subset == "sqrt2") return subset_sqrt2(ctx, c.N, lower);
  if (c.subset == "random") return subset_random(ctx, c.N, c.density, c.seed, lower);
  throw UsageError("--subset must be full, sqrt2 or random");
}

json subset_json(const PrimeSubset& s) {
  json j{{"kind", std::string(to_string(s.kind))}, {"N", s.N}, {"lower", s.lower},
         {"size", s.members.size()}, {"K", s.K}};
  if (s.kind == SubsetKind::random) {
    j["density"] = s.density;
    j["seed"] = s.seed;
  }
  return j;
}

std::uint64_t grid_size(const RunConfig& c) {
  return c.grid != 0 ? c.grid : default_grid_size(c.N, c.grid_factor);
}

void require_N(const RunConfig& c) {
  if (c.N < 100) throw UsageError("--N must be at least 100");
}

int finish_checks(const CheckReport& rows, std::ostream& err) {
  bool ok = true;
  for (const auto& r : rows)
    if (r.status == CheckStatus::fail) {
      err << "verification failed: " << r.lemma << '\n';
      ok = false;
    }
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_spectrum(RunConfig c, std::ostream& out) {
  require_N(c);
  if (c.format.empty()) c.format = "plotdata";
  require_format(c, {"plotdata", "csv", "json"});
  if (c.stride == 0) throw UsageError("--stride must be >= 1");
  const PrimeContext ctx(std::max<std::uint64_t>(c.N, 2));
  const auto s = make_subset(ctx, c, c.lower);
  const SpectrumGrid grid(s, grid_size(c));
  const std::uint64_t G = grid.size();
  const double T0 = s.T0();

  Sink sink(c.output, out);
  if (c.format == "json") {
    double peak = 0.0;
    std::uint64_t peak_j = 0;
    for (std::uint64_t j = 1; j < G; ++j)
      if (grid.abs(j) > peak) {
        peak = grid.abs(j);
        peak_j = j;
      }
    json j = header(c);
    j["subset"] = subset_json(s);
    j["grid"] = G;
    j["T0"] = T0;
    j["l1_over_T0"] = l1_estimate(grid) / T0;
    j["largest_nonzero_peak"] = {{"alpha", static_cast<double>(peak_j) / static_cast<double>(G)},
                                 {"height", peak / T0}};
    json samples = json::array();
    for (std::uint64_t k = 0; k < G; k += c.stride)
      samples.push_back({static_cast<double>(k) / static_cast<double>(G), grid.abs(k) / T0});
    j["samples"] = samples;
    *sink << j.dump(2) << '\n';
  } else {
    const char sep = c.format == "csv" ? ',' : ' ';
    if (c.format == "csv") *sink << "alpha,abs_over_T0\n";
    for (std::uint64_t k = 0; k < G; k += c.stride)
      *sink << format_shortest(static_cast<double>(k) / static_cast<double>(G)) << sep
            << format_real(grid.abs(k) / T0) << '\n';
  }
  sink.close(c.output);

  std::string farey = c.farey_output;
  if (farey.empty() && c.output != "-") farey = c.output + ".farey";
  if (!farey.empty()) {
    std::ofstream f(farey);
    if (!f) throw std::runtime_error("cannot open " + farey + " for writing");
    const PrimeContext small(std::max<std::uint64_t>(c.farey_q, 2));
    f << "# a q alpha squarefree\n";
    for (const auto& p : farey_points(c.farey_q))
      f << p.a << ' ' << p.q << ' ' << format_shortest(p.position()) << ' '
        << (p.q == 1 || small.squarefree(static_cast<std::uint64_t>(p.q)) ? 1 : 0) << '\n';
    if (!f) throw std::runtime_error("write failed for " + farey);
  }
  return kExitOk;
}

int cmd_cusps(RunConfig c, std::ostream& out, std::ostream& err) {
  require_N(c);
  if (c.format.empty()) c.format = "json";
  require_format(c, {"json", "csv", "plotdata"});
  const PrimeContext ctx(std::max<std::uint64_t>(c.N, 2));
  const auto s = make_subset(ctx, c, c.lower);
  const SpectrumGrid grid(s, grid_size(c));
  const auto rep = find_cusps(grid, s, c.A);
  const std::vector<double> xis{c.xi};
  auto checks = structure_check(ctx, rep, s, xis);
  WorstCase bound("cusp-count");
  bound.observe(static_cast<double>(rep.wellspaced.size()), rep.bound,
                {{"A", c.A}, {"K", rep.K}, {"N", static_cast<double>(c.N)}});
  checks.insert(checks.begin(), bound.finish("well-spaced cusps against 19 A^2 K log(2A)"));

  Sink sink(c.output, out);
  if (c.format == "json") {
    json j = header(c);
    j["subset"] = subset_json(s);
    j["grid"] = grid.size();
    j["report"] = to_json(rep);
    j["farey_prediction"] = farey_cusp_prediction(ctx, c.A);
    j["checks"] = to_json(checks);
    *sink << j.dump(2) << '\n';
  } else if (c.format == "csv") {
    *sink << "lo,hi,peak_pos,peak_height\n";
    for (const auto& a : rep.arcs)
      *sink << format_real(a.lo) << ',' << format_real(a.hi) << ',' << format_real(a.peak.position)
            << ',' << format_real(a.peak.weight) << '\n';
  } else {
    for (const auto& a : rep.arcs)
      *sink << format_real(a.peak.position) << ' ' << format_real(a.peak.weight) << '\n';
  }
  sink.close(c.output);
  return finish_checks(checks, err);
}

int cmd_companions(RunConfig c, std::ostream& out, std::ostream& err) {
  require_N(c);
  if (c.format.empty()) c.format = "json";
  require_format(c, {"json"});
  const PrimeContext ctx(std::max<std::uint64_t>(c.N, 2));
  const auto s = make_subset(ctx, c, c.lower);
  const auto res = companion_search(s, c.xi, c.A, c.B);
  json j = header(c);
  j["subset"] = subset_json(s);
  j["xi"] = c.xi;
  j["A"] = c.A;
  j["B"] = c.B;
  j["K"] = s.K;
  j["result"] = to_json(res);
  Sink sink(c.output, out);
  *sink << j.dump(2) << '\n';
  sink.close(c.output);
  if (!res.holds()) {
    err << "verification failed: companion-count\n";
    return kExitVerifyFailed;
  }
  return kExitOk;
}

DecomposeParams decompose_params(const RunConfig& c) {
  DecomposeParams p;
  p.z0 = c.z0;
  p.z = c.z;
  p.M = c.M;
  p.A = c.A;
  p.grid_factor = c.grid_factor;
  p.samples = c.samples;
  p.alpha_samples = c.alpha_samples;
  p.seed = c.seed;
  return p;
}

// Lower cutoff max(sqrt N, z) unless --lower was given.
double decompose_lower(const PrimeContext& ctx, const RunConfig& c) {
  if (c.lower > 0.0) return c.lower;
  double z = c.z;
  if (z <= 0.0) {
    const mpz_class P = primorial(ctx, c.z0);
    const double M = c.M != 0 ? static_cast<double>(c.M) : P.get_d();
    z = std::sqrt(static_cast<double>(c.N) / (M * c.z0));
  }
  return std::max(std::sqrt(static_cast<double>(c.N)), std::floor(z) + 1.0);
}

int cmd_decompose(RunConfig c, std::ostream& out, std::ostream& err) {
  require_N(c);
  if (c.format.empty()) c.format = "json";
  require_format(c, {"json", "csv"});
  const PrimeContext ctx(std::max<std::uint64_t>(c.N, 2));
  const auto s = make_subset(ctx, c, decompose_lower(ctx, c));
  const auto d = decompose(ctx, s, decompose_params(c));
  auto checks = d.checks();
  for (auto& r : cusp_suppression_report(d, s)) checks.push_back(std::move(r));

  Sink sink(c.output, out);
  if (c.format == "csv") {
    write_decomposition_csv(*sink, d);
  } else {
    json j = header(c);
    j["subset"] = subset_json(s);
    j["decomposition"] = to_json(d);
    j["checks"] = to_json(checks);
    *sink << j.dump(2) << '\n';
  }
  sink.close(c.output);
  if (!c.csv_output.empty()) {
    Sink csv(c.csv_output, out);
    write_decomposition_csv(*csv, d);
    csv.close(c.csv_output);
  }
  return finish_checks(checks, err);
}

CheckReport suite_estimates(const RunConfig& c) {
  EstimateRanges r;
  r.zmax = c.zmax;
  r.approx_points.erase(
      std::remove_if(r.approx_points.begin(), r.approx_points.end(),
                     [&](double z) { return z > static_cast<double>(c.zmax); }),
      r.approx_points.end());
  r.vanlr_zmax = std::min(r.vanlr_zmax, c.zmax);
  const std::uint64_t pr = r.square_zmax * r.square_zmax + 2 * r.square_zmax;
  const PrimeContext ctx(std::max(c.zmax, pr));
  return verify_explicit_estimates(ctx, r);
}

CheckReport suite_sieve(const RunConfig& c) {
  const PrimeContext ctx(std::max<std::uint64_t>(c.envelope_max, 2500));
  CheckReport out;
  WorstCase fourier("sieve-fourier-equivalence");
  for (const double z0 : {2.0, 3.0, 5.0})
    for (const double z : {20.0, 30.0, 50.0})
      for (const std::uint64_t tau : {1u, 5u, 7u}) {
        SieveParams p;
        p.z0 = z0;
        p.z = z;
        p.tau = tau;
        const auto w = build_weights(ctx, p);
        const auto fc = check_fourier_equivalence(w, c.sieve_nmax);
        fourier.observe(static_cast<double>(fc.mismatches), 0.0,
                        {{"z0", z0}, {"z", z}, {"tau", static_cast<double>(tau)},
                         {"n_max", static_cast<double>(c.sieve_nmax)},
                         {"first_mismatch", static_cast<double>(fc.first_mismatch)}});
        if (z0 == 3.0 && z == 50.0 && tau == 1) {
          for (auto& r : enveloping_report(ctx, w, c.envelope_max)) out.push_back(std::move(r));
          for (auto& r : wq_bound_report(ctx, w)) out.push_back(std::move(r));
        }
      }
  out.insert(out.begin(), fourier.finish("exact mismatches over the 27 parameter sets"));
  return out;
}

CheckReport suite_cusps(const RunConfig& c) {
  RunConfig k = c;
  if (k.N == 0) k.N = 10'000;
  const PrimeContext ctx(k.N);
  const auto s = make_subset(ctx, k, k.lower);
  const SpectrumGrid grid(s, grid_size(k));
  CheckReport out;
  WorstCase count("cusp-count");
  for (const double A : {2.0, 4.0, 8.0, 16.0}) {
    const auto rep = find_cusps(grid, s, A);
    count.observe(static_cast<double>(rep.wellspaced.size()), rep.bound,
                  {{"A", A}, {"K", rep.K}, {"N", static_cast<double>(k.N)}});
    const std::vector<double> xis{0.0, 0.5};
    for (auto& r : structure_check(ctx, rep, s, xis)) {
      r.params.insert(r.params.begin(), {"A", A});
      out.push_back(std::move(r));
    }
  }
  out.insert(out.begin(), count.finish("well-spaced cusps against 19 A^2 K log(2A)"));
  return out;
}

CheckReport suite_large_sieve(const RunConfig& c) {
  RunConfig k = c;
  if (k.N == 0) k.N = 10'000;
  const PrimeContext ctx(std::max<std::uint64_t>(k.N, 2500));
  const auto s = make_subset(ctx, k, k.lower);
  auto out = large_sieve_trials(ctx, s, k.trials, k.seed);
  out.push_back(spaced_moduli_trials(k.N, 100, k.seed));
  SieveParams p;
  p.z0 = k.z0;
  p.z = 50.0;
  p.mode = k.mode == "fast" ? Mode::floating : Mode::exact;
  const auto w = build_weights(ctx, p);
  std::vector<cplx> u(k.N, cplx{1.0, 0.0});
  for (auto& r : wq_large_sieve_check(ctx, w, u, k.z0)) out.push_back(std::move(r));
  return out;
}

CheckReport suite_transference(const RunConfig& c) {
  RunConfig k = c;
  if (k.N == 0) k.N = 100'000;
  const PrimeContext ctx(k.N);
  const auto s = make_subset(ctx, k, decompose_lower(ctx, k));
  const auto d = decompose(ctx, s, decompose_params(k));
  auto out = d.checks();
  for (auto& r : cover_report(d.cover)) out.push_back(std::move(r));
  for (auto& r : cusp_suppression_report(d, s)) out.push_back(std::move(r));
  out.push_back(unit_chord_check(10'000, k.seed));
  return out;
}

int cmd_verify(RunConfig c, std::ostream& out, std::ostream& err) {
  if (c.format.empty()) c.format = "json";
  require_format(c, {"json"});
  using Suite = std::function<CheckReport(const RunConfig&)>;
  const std::vector<std::pair<std::string, Suite>> suites{
      {"g-functions", suite_estimates},
      {"sieve", suite_sieve},
      {"cusps", suite_cusps},
      {"large-sieve", suite_large_sieve},
      {"transference", suite_transference}};
  json j = header(c);
  j["suite"] = c.suite;
  json results = json::object();
  CheckReport all;
  bool known = false;
  for (const auto& [name, run] : suites) {
    if (c.suite != "all" && c.suite != name) continue;
    known = true;
    auto rows = run(c);
    results[name] = to_json(rows);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  if (!known)
    throw UsageError("--suite must be all, g-functions, sieve, cusps, large-sieve or transference");
  std::vector<std::string> failed;
  for (const auto& r : all)
    if (r.status == CheckStatus::fail) failed.push_back(r.lemma);
  j["passed"] = failed.empty();
  j["failed"] = failed;
  j["results"] = results;
  Sink sink(c.output, out);
  *sink << j.dump(2) << '\n';
  sink.close(c.output);
  return finish_checks(all, err);
}

void add_common(CLI::App* sub, RunConfig& c, bool need_N) {
  auto* n = sub->add_option("--N", c.N, "Length of the prime range [lower, N]");
  if (need_N) n->required();
  sub->add_option("--subset", c.subset, "full | sqrt2 | random")->capture_default_str();
  sub->add_option("--density", c.density, "Keep probability for --subset random")
      ->capture_default_str();
  sub->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
  sub->add_option("--lower", c.lower, "Smallest prime kept (default: command specific)");
  sub->add_option("--format", c.format, "json | csv | plotdata");
  sub->add_option("--output,-o", c.output, "Output path, - for stdout")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads")->capture_default_str();
  sub->add_option("--grid", c.grid, "FFT grid size (power of two)");
  sub->add_option("--grid-factor", c.grid_factor, "Grid oversampling when --grid is absent")
      ->capture_default_str();
  sub->add_option("--A", c.A, "Cusp parameter A >= 1")->capture_default_str();
}

}  // namespace

std::vector<std::string> read_config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty key");
    tokens.push_back("--" + key);
    tokens.push_back(trim(line.substr(eq + 1)));
  }
  return tokens;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), out, err);
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  // Config entries go right after the subcommand so that later flags win.
  try {
    std::string cfg;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) {
        cfg = args[i + 1];
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                   args.begin() + static_cast<std::ptrdiff_t>(i + 2));
        break;
      }
      if (args[i].rfind("--config=", 0) == 0) {
        cfg = args[i].substr(9);
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }
    }
    if (!cfg.empty()) {
      const auto tokens = read_config_tokens(cfg);
      const auto sub = std::find_if(args.begin(), args.end(),
                                    [](const std::string& a) { return !a.empty() && a[0] != '-'; });
      if (sub == args.end()) throw UsageError("--config needs a subcommand");
      args.insert(sub + 1, tokens.begin(), tokens.end());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Cusps of prime exponential sums, enveloping sieve weights and transference"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.add_option("--config", "key=value file; explicit flags override it");

  auto* spectrum = app.add_subcommand("spectrum", "|T*(alpha)|/T*(0) on an FFT grid, plus Farey points");
  add_common(spectrum, c, true);
  spectrum->add_option("--stride", c.stride, "Write every stride-th grid point")->capture_default_str();
  spectrum->add_option("--farey-q", c.farey_q, "Largest denominator in the Farey overlay")
      ->capture_default_str();
  spectrum->add_option("--farey-output", c.farey_output,
                       "Farey overlay path (default: <output>.farey when --output is a file)");

  auto* cusps = app.add_subcommand("cusps", "A-cusp arcs, well-spaced cusps and structure checks");
  add_common(cusps, c, true);
  cusps->add_option("--xi", c.xi, "Base point for the rational-shift check")->capture_default_str();

  auto* companions = app.add_subcommand("companions", "Companions xi + a/q of a B-cusp xi");
  add_common(companions, c, true);
  companions->add_option("--B", c.B, "xi must be a B-cusp")->capture_default_str();
  companions->add_option("--xi", c.xi, "Base cusp")->capture_default_str();

  auto* decomp = app.add_subcommand("decompose", "f = f_flat / (V log N) + f_sharp with identity checks");
  add_common(decomp, c, true);
  decomp->add_option("--z0", c.z0, "Unsieving parameter")->capture_default_str();
  decomp->add_option("--z", c.z, "Sieve level (default sqrt(N/(M z0)))");
  decomp->add_option("--M", c.M, "Bohr modulus (default P(z0))");
  decomp->add_option("--samples", c.samples, "Samples per cover interval")->capture_default_str();
  decomp->add_option("--alpha-samples", c.alpha_samples, "Random alpha for the identity checks")
      ->capture_default_str();
  decomp->add_option("--csv", c.csv_output, "Also write n,f,f_flat,f_sharp to this path");

  auto* verify = app.add_subcommand("verify", "Run a verification suite; exit 1 on any failure");
  add_common(verify, c, false);
  verify->add_option("--suite", c.suite,
                     "all | g-functions | sieve | cusps | large-sieve | transference")
      ->capture_default_str();
  verify->add_option("--zmax", c.zmax, "Range of the G-function estimate scans")->capture_default_str();
  verify->add_option("--sieve-nmax", c.sieve_nmax, "n range of the exact Fourier comparison")
      ->capture_default_str();
  verify->add_option("--envelope-max", c.envelope_max, "n range of the enveloping checks")
      ->capture_default_str();
  verify->add_option("--trials", c.trials, "Large sieve trials")->capture_default_str();
  verify->add_option("--z0", c.z0, "Unsieving parameter (transference, large-sieve)")
      ->capture_default_str();
  verify->add_option("--z", c.z, "Sieve level for transference");
  verify->add_option("--M", c.M, "Bohr modulus for transference");
  verify->add_option("--mode", c.mode, "Sieve weights for the large-sieve suite: exact | fast")
      ->capture_default_str();
  verify->add_option("--alpha-samples", c.alpha_samples, "Random alpha for transference")
      ->capture_default_str();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << "run with --help for usage\n";
    return kExitUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    if (c.threads == 0) throw UsageError("--threads must be >= 1");
    if (c.mode != "exact" && c.mode != "fast") throw UsageError("--mode must be exact or fast");
    set_thread_count(c.threads);
    if (c.command == "spectrum") return cmd_spectrum(c, out);
    if (c.command == "cusps") return cmd_cusps(c, out, err);
    if (c.command == "companions") return cmd_companions(c, out, err);
    if (c.command == "decompose") return cmd_decompose(c, out, err);
    return cmd_verify(c, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    // Precondition, parameter, capacity and I/O errors: the run could not start or finish.
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace cuspsieve::cli
