#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "melnikov/errors.hpp"
#include "melnikov/io.hpp"
#include "melnikov/parallel.hpp"
#include "melnikov/quadrature.hpp"
#include "melnikov/reduction.hpp"
#include "melnikov/simulator.hpp"
#include "melnikov/verify.hpp"
#include "melnikov/zeros.hpp"

using namespace melnikov;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string system;
  int degree = 3;
  std::uint64_t seed = 1;
  int count = 1;
  std::string perturbation;
  std::optional<double> one_zero;
  std::vector<std::string> pairs;
  std::vector<double> h_values;
  int points = 17;
  int grid = kDefaultGrid;
  double tol = kDefaultZeroTol;
  int oracle_samples = 20;
  double oracle_tol = 1e-6;
  double eps = 1e-3;
  int cycle_samples = 40;
  std::vector<double> window{0.1, 0.9};
  std::string simulate = "auto";
  bool corrupt_pf = false;
  std::string out = ".";
  int threads = 0;
};

std::vector<SystemId> systems_of(const Config& c, bool allow_both) {
  if (c.system.empty() || c.system == "both" || c.system == "BOTH") {
    if (allow_both) return {SystemId::LV, SystemId::BT};
    if (c.system.empty()) return {SystemId::LV};
    throw UsageError("this command takes a single system");
  }
  try {
    return {parse_system(c.system)};
  } catch (const std::exception&) {
    throw UsageError("unknown system '" + c.system + "' (LV, BT)");
  }
}

SystemId single_system(const Config& c) { return systems_of(c, false).front(); }

std::filesystem::path out_path(const Config& c, const std::string& name) {
  std::filesystem::create_directories(c.out);
  return std::filesystem::path(c.out) / name;
}

void emit(const Config& c, const std::string& name, const Json& summary) {
  std::string text = summary.dump(2) + "\n";
  write_text_file(out_path(c, name).string(), text);
  std::cout << text;
}

std::vector<IndexPair> parse_pairs(const std::vector<std::string>& items) {
  std::vector<IndexPair> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
      if (tok.find_first_not_of(" \t") == std::string::npos) continue;
      int i, j;
      char comma;
      std::istringstream ts(tok);
      if (!(ts >> i >> comma >> j) || comma != ',') throw UsageError("bad index pair '" + tok + "' (expected i,j)");
      out.push_back({i, j});
    }
  }
  if (out.empty()) throw UsageError("no (i,j) pairs given");
  return out;
}

std::vector<Perturbation> perturbations_of(const Config& c, SystemId sys, std::string& source) {
  std::vector<Perturbation> ps;
  if (!c.perturbation.empty()) {
    ps.push_back(read_perturbation_file(c.perturbation));
    source = "file:" + c.perturbation;
  } else if (c.one_zero) {
    if (!energy_interval(sys).contains(*c.one_zero)) throw UsageError("--one-zero energy outside the annulus");
    ps.push_back(one_zero_perturbation(sys, *c.one_zero));
    source = "one-zero";
  } else {
    if (c.degree < 1) throw UsageError("--degree must be >= 1");
    if (c.count < 1) throw UsageError("--count must be >= 1");
    std::mt19937_64 rng(c.seed);
    for (int k = 0; k < c.count; ++k) ps.push_back(random_perturbation(c.degree, rng));
    source = "random";
  }
  return ps;
}

int cmd_integrals(const Config& c) {
  SystemId sys = single_system(c);
  auto pairs = parse_pairs(c.pairs);
  std::vector<double> hs = c.h_values;
  if (hs.empty()) {
    if (c.points < 2) throw UsageError("--points must be >= 2");
    hs = guarded_grid(sys, c.points, kSuiteGuard);
  }
  for (double h : hs)
    if (!energy_interval(sys).contains(h)) throw UsageError("energy " + format_real(h) + " outside the annulus");
  std::vector<double> vals(pairs.size() * hs.size());
  parallel_for(vals.size(), [&](std::size_t t) {
    const auto& ij = pairs[t / hs.size()];
    vals[t] = abelian_integral({sys, ij.i, ij.j}, hs[t % hs.size()]);
  });
  std::ostringstream csv;
  csv << "i,j,h,value\n";
  for (std::size_t t = 0; t < vals.size(); ++t) {
    const auto& ij = pairs[t / hs.size()];
    csv << ij.i << ',' << ij.j << ',' << format_real(hs[t % hs.size()]) << ',' << format_real(vals[t]) << '\n';
  }
  write_text_file(out_path(c, "integrals.csv").string(), csv.str());
  Json s;
  s["command"] = "integrals";
  s["system"] = std::string(to_string(sys));
  s["pairs"] = pairs.size();
  s["energies"] = hs.size();
  s["rows"] = vals.size();
  s["table"] = "integrals.csv";
  emit(c, "summary.json", s);
  return 0;
}

int cmd_reduce(const Config& c) {
  SystemId sys = single_system(c);
  std::string source;
  Perturbation p = perturbations_of(c, sys, source).front();
  MelnikovRepresentation rep = melnikov_representation(sys, p);
  write_text_file(out_path(c, "perturbation.txt").string(), format_perturbation(p));
  write_text_file(out_path(c, "representation.json").string(), export_representation(rep));

  EnergyInterval iv = energy_interval(sys);
  int N = c.oracle_samples;
  if (N < 1) throw UsageError("--oracle-samples must be >= 1");
  std::vector<double> hs(N), rv(N);
  std::vector<MelnikovValue> dv(N);
  for (int k = 0; k < N; ++k) hs[k] = iv.lo + iv.width() * (k + 0.5) / N;
  parallel_for(N, [&](std::size_t k) {
    rv[k] = evaluate_representation(rep, hs[k]);
    dv[k] = melnikov_direct_detail(sys, p, hs[k]);
  });
  std::ostringstream csv;
  csv << "h,representation,direct,magnitude,rel_err\n";
  double worst = 0.0;
  for (int k = 0; k < N; ++k) {
    double e = std::abs(rv[k] - dv[k].value) / std::max(dv[k].magnitude, 1e-300);
    worst = std::max(worst, e);
    csv << format_real(hs[k]) << ',' << format_real(rv[k]) << ',' << format_real(dv[k].value) << ','
        << format_real(dv[k].magnitude) << ',' << format_real(e) << '\n';
  }
  write_text_file(out_path(c, "oracle.csv").string(), csv.str());

  DegreeCheck dc = check_degrees(rep);
  const auto& b = basis(sys);
  Json degs = Json::array();
  bool corrected_ok = dc.denom_ok;
  for (std::size_t k = 0; k < dc.bounds.size(); ++k) {
    // LV: the I(1,0), I(0,0) coefficients may exceed the stated bound by one when the
    // x^0 y^odd coefficients of f+ and f- differ (the I(-1,2k) terms).
    int allowed = (sys == SystemId::LV && (b[k] == IndexPair{1, 0} || b[k] == IndexPair{0, 0})) ? 1 : 0;
    if (dc.excess[k] > allowed) corrected_ok = false;
    degs.push_back({{"element", to_string(b[k])},
                    {"degree", dc.degrees[k]},
                    {"bound", dc.bounds[k]},
                    {"excess", dc.excess[k]}});
  }
  bool oracle_ok = worst <= c.oracle_tol;
  Json s;
  s["command"] = "reduce";
  s["system"] = std::string(to_string(sys));
  s["degree"] = p.degree();
  s["source"] = source;
  if (source == "random") s["seed"] = c.seed;
  s["denom_power"] = rep.decomposition.denom_power();
  s["denom_ok"] = dc.denom_ok;
  s["degrees"] = degs;
  s["stated_bounds_hold"] = dc.ok();
  s["corrected_bounds_hold"] = corrected_ok;
  s["oracle_samples"] = N;
  s["max_oracle_mismatch"] = worst;
  s["oracle_tol"] = c.oracle_tol;
  s["oracle_ok"] = oracle_ok;
  s["passed"] = oracle_ok && corrected_ok;
  emit(c, "summary.json", s);
  return oracle_ok && corrected_ok ? 0 : kExitFail;
}

int cmd_verify(const Config& c) {
  std::vector<SuiteResult> all;
  for (SystemId sys : systems_of(c, true)) {
    auto r = default_suites(sys, c.corrupt_pf);
    all.insert(all.end(), r.begin(), r.end());
  }
  std::ostringstream csv;
  csv << "suite,passed,metric,threshold,checks,skipped\n";
  Json suites = Json::array();
  bool ok = true;
  for (const auto& r : all) {
    std::cerr << suite_line(r) << '\n';
    ok = ok && r.passed;
    csv << r.name << ',' << (r.passed ? 1 : 0) << ',' << format_real(r.metric) << ',' << format_real(r.threshold) << ','
        << r.checks << ',' << r.skipped << '\n';
    Json j{{"suite", r.name},   {"passed", r.passed}, {"metric", r.metric},
           {"threshold", r.threshold}, {"checks", r.checks}, {"skipped", r.skipped}};
    if (!r.detail.empty()) j["detail"] = r.detail;
    suites.push_back(j);
  }
  write_text_file(out_path(c, "verify.csv").string(), csv.str());
  Json s;
  s["command"] = "verify";
  s["corrupt_pf"] = c.corrupt_pf;
  s["suites"] = suites;
  for (SystemId sys : systems_of(c, true))
    if (sys == SystemId::BT) s["bt_second_derivative_zero"] = bt_second_derivative_zero();
  s["passed"] = ok;
  emit(c, "summary.json", s);
  return ok ? 0 : kExitFail;
}

int cmd_cycles(const Config& c) {
  SystemId sys = single_system(c);
  if (c.eps == 0.0) throw UsageError("--eps must be nonzero for the cycle search");
  if (std::abs(c.eps) > 0.1) throw UsageError("|eps| must be <= 0.1");
  if (c.window.size() != 2 || !(0.0 < c.window[0] && c.window[0] < c.window[1] && c.window[1] < 1.0))
    throw UsageError("--window needs two fractions 0 < lo < hi < 1");
  std::string source;
  auto ps = perturbations_of(c, sys, source);
  bool simulate = c.simulate == "on" || (c.simulate == "auto" && ps.size() == 1);
  if (c.simulate != "on" && c.simulate != "off" && c.simulate != "auto")
    throw UsageError("--simulate takes auto, on or off");

  EnergyInterval iv = energy_interval(sys);
  double h_lo = iv.lo + c.window[0] * iv.width(), h_hi = iv.lo + c.window[1] * iv.width();
  double xa = section_coordinate(sys, h_lo), xb = section_coordinate(sys, h_hi);
  auto seg = std::minmax(xa, xb);

  std::vector<ZeroReport> reports(ps.size());
  parallel_for(ps.size(), [&](std::size_t k) { reports[k] = isolate_zeros(melnikov_representation(sys, ps[k]), c.grid, c.tol); });

  std::ostringstream zcsv, ccsv;
  zcsv << "perturbation,index,h_lo,h_hi,root,kind\n";
  ccsv << "perturbation,eps,fixed_x,h_cycle,residual\n";
  Json items = Json::array();
  bool ok = true;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const ZeroReport& z = reports[k];
    int predicted = 0;
    for (std::size_t b = 0; b < z.brackets.size(); ++b) {
      const auto& br = z.brackets[b];
      zcsv << k << ',' << b << ',' << format_real(br.h_lo) << ',' << format_real(br.h_hi) << ','
           << format_real(br.root) << ',' << to_string(br.kind) << '\n';
      if (br.kind == ZeroKind::odd_simple && br.root > h_lo && br.root < h_hi) ++predicted;
    }
    Json it{{"perturbation", k},       {"odd_simple", z.odd_count()}, {"even_suspected", z.even_count()},
            {"all_zero", z.all_zero},  {"bound", z.bound},            {"within_bound", z.within_bound}};
    ok = ok && z.within_bound;
    if (simulate) {
      auto f = find_limit_cycles(sys, ps[k], c.eps, {seg.first, seg.second}, c.cycle_samples);
      for (const auto& cyc : f)
        ccsv << k << ',' << format_real(cyc.eps) << ',' << format_real(cyc.fixed_x) << ',' << format_real(cyc.h_cycle)
             << ',' << format_real(cyc.residual) << '\n';
      bool match = z.all_zero || static_cast<int>(f.size()) == predicted;
      it["predicted_in_window"] = predicted;
      it["cycles"] = f.size();
      it["counts_match"] = match;
      ok = ok && match;
    }
    items.push_back(it);
  }
  write_text_file(out_path(c, "zeros.csv").string(), zcsv.str());
  if (simulate) write_text_file(out_path(c, "cycles.csv").string(), ccsv.str());
  Json s;
  s["command"] = "cycles";
  s["system"] = std::string(to_string(sys));
  s["source"] = source;
  if (source == "random") {
    s["degree"] = c.degree;
    s["seed"] = c.seed;
  }
  s["grid"] = c.grid;
  s["tol"] = c.tol;
  s["bound"] = theoretical_bound(sys, ps.front().degree());
  s["simulated"] = simulate;
  if (simulate) {
    s["eps"] = c.eps;
    s["window"] = {h_lo, h_hi};
  }
  s["results"] = items;
  s["passed"] = ok;
  emit(c, "summary.json", s);
  return ok ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order Melnikov functions of piecewise LV and BT perturbations"};
  app.set_config("--config", "", "flat key = value file with option names as keys");
  app.require_subcommand(1);
  Config c;
  app.add_option("--system", c.system, "LV or BT (verify also accepts both; its default)");
  app.add_option("--degree", c.degree, "perturbation degree n for random perturbations");
  app.add_option("--seed", c.seed, "seed of the random perturbation stream");
  app.add_option("--count", c.count, "number of random perturbations (cycles)");
  app.add_option("--perturbation", c.perturbation, "perturbation file")->check(CLI::ExistingFile);
  app.add_option("--one-zero", c.one_zero, "constructed perturbation whose M has its single zero at this energy");
  app.add_option("--pairs", c.pairs, "index pairs 'i,j;i,j' (integrals)");
  app.add_option("--energy", c.h_values, "explicit energies (integrals)");
  app.add_option("--points", c.points, "guarded energy grid size (integrals)");
  app.add_option("--grid", c.grid, "zero-analysis grid size");
  app.add_option("--tol", c.tol, "zero-analysis tolerance");
  app.add_option("--oracle-samples", c.oracle_samples, "energies for the quadrature oracle (reduce)");
  app.add_option("--oracle-tol", c.oracle_tol, "relative oracle tolerance (reduce)");
  app.add_option("--eps", c.eps, "perturbation size for the cycle search");
  app.add_option("--cycle-samples", c.cycle_samples, "section samples for the cycle search");
  app.add_option("--window", c.window, "energy window of the cycle search as interval fractions")->expected(2);
  app.add_option("--simulate", c.simulate, "auto, on or off (auto: on for a single perturbation)");
  app.add_flag("--corrupt-pf", c.corrupt_pf, "test hook: perturb one Picard-Fuchs matrix entry (verify)");
  app.add_option("--out", c.out, "output directory");
  app.add_option("--threads", c.threads, "worker threads (overrides MELNIKOV_THREADS)");

  auto* integrals = app.add_subcommand("integrals", "table of I(i,j)(h)")->fallthrough();
  auto* reduce = app.add_subcommand("reduce", "representation of M plus quadrature oracle")->fallthrough();
  auto* verify = app.add_subcommand("verify", "Picard-Fuchs, Riccati, reflection, derivative and annihilator suites")
                     ->fallthrough();
  auto* cycles = app.add_subcommand("cycles", "zero report and return-map limit cycles")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (c.threads > 0) setenv("MELNIKOV_THREADS", std::to_string(c.threads).c_str(), 1);

  try {
    if (integrals->parsed()) return cmd_integrals(c);
    if (reduce->parsed()) return cmd_reduce(c);
    if (verify->parsed()) return cmd_verify(c);
    if (cycles->parsed()) return cmd_cycles(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
