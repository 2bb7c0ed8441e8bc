// racebar command-line front end.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <iostream>
#include <optional>
#include <thread>

#include "racebar/find_barrier.hpp"
#include "racebar/serialization.hpp"

using namespace racebar;

namespace {

struct RunConfig {
  Int q = 0;
  std::vector<Int> residues;
  std::string construction = "auto";
  std::optional<double> sigma, tau, sigma1, sigma2, beta1, t, gamma, epsilon;
  std::size_t J = 10000;
  std::optional<double> u0, u1;
  std::optional<std::size_t> samples;
  std::string out;
  std::string file;
  Int qmax = 11;
  Int mmax = 0;
  unsigned threads = 0;
  bool verbose = false;
};

BarrierParams barrier_params(const RunConfig& c) {
  BarrierParams p;
  if (c.sigma) p.sigma_cap = *c.sigma;
  if (c.tau) p.tau = *c.tau;
  if (c.sigma1) p.sigma1 = *c.sigma1;
  if (c.sigma2) p.sigma2 = *c.sigma2;
  if (c.beta1) p.beta1 = *c.beta1;
  if (c.t) p.t = *c.t;
  if (c.gamma) p.gamma = *c.gamma;
  if (c.epsilon) p.epsilon = *c.epsilon;
  detail::require(p.epsilon > 0.0L, "epsilon must be positive");
  detail::require(p.beta1 >= 0.5L && p.beta1 < p.sigma2 && p.sigma2 < p.sigma1,
                  "parameters must satisfy 1/2 <= beta1 < sigma2 < sigma1");
  return p;
}

GshParams gsh_params(const RunConfig& c) {
  GshParams p;
  if (c.t) p.t = *c.t;
  if (c.sigma1) p.sigma1 = *c.sigma1;
  if (c.sigma2) p.sigma2 = *c.sigma2;
  if (c.beta1) p.beta = *c.beta1;
  p.J = c.J;
  return p;
}

RaceTriple triple_of(const RunConfig& c) {
  detail::require(c.residues.size() == 3, "expected three residues a1 a2 a3");
  return RaceTriple(c.q, c.residues[0], c.residues[1], c.residues[2]);
}

std::string residues_str(const std::array<Int, 3>& r) { return fmt::format("{} > {} > {}", r[0], r[1], r[2]); }

void print_margins(const std::map<std::string, double>& m) {
  for (const auto& [k, v] : m) fmt::print("  {:<22} {:.6e}\n", k, v);
}

int cmd_group(const RunConfig& c) {
  auto g = UnitGroup::make(c.q);
  fmt::print("q = {}  phi = {}  exponent = {}  {}\n", g->modulus(), g->phi(), g->exponent(),
             g->is_cyclic() ? "cyclic" : "not cyclic");
  for (const auto& gen : g->generators()) fmt::print("  generator {} of order {}\n", gen.residue, gen.order);
  CharacterGroup cg(g);
  std::map<Int, int> orders;
  for (const auto& chi : cg.all()) ++orders[chi.order()];
  fmt::print("{} characters; by order:", cg.size());
  for (const auto& [o, n] : orders) fmt::print(" {}:{}", o, n);
  fmt::print("\n");
  return 0;
}

int cmd_chars(const RunConfig& c) {
  CharacterGroup cg(c.q);
  auto units = c.residues.empty() ? cg.group()->units() : c.residues;
  for (Int a : units) detail::require(cg.group()->is_unit(a), fmt::format("{} is not a unit modulo {}", a, c.q));
  fmt::print("{:>5} {:>6}  {:<14}", "index", "order", "exponents");
  for (Int a : units) fmt::print(" {:>7}", a);
  fmt::print("\n");
  for (std::size_t i = 0; i < cg.size(); ++i) {
    const auto& chi = cg[i];
    fmt::print("{:>5} {:>6}  {:<14}", i, chi.order(), fmt::format("{}", fmt::join(chi.exponents(), ",")));
    for (Int a : units) fmt::print(" {:>7}", chi(a).str());
    fmt::print("\n");
  }
  fmt::print("values are angles r with chi(a) = e(r)\n");
  return 0;
}

void print_certificate(const GoodnessCertificate& cert) {
  if (cert.good) {
    fmt::print("{}: GOOD\n", cert.m);
    return;
  }
  fmt::print("{}: NOT GOOD, failing j: {} (full range: {})\n", cert.m, fmt::join(cert.failing_j, ","),
             fmt::join(full_range_failing(cert), ","));
}

int cmd_good(const RunConfig& c) {
  if (c.mmax == 0) {
    auto cert = is_good(c.q);
    print_certificate(cert);
    if (c.verbose)
      for (const auto& [j, w] : cert.witnesses)
        fmt::print("  j={} k={} {}\n", j, w.k,
                   w.kind == WitnessKind::Coincidence ? std::string("coincidence")
                                                      : fmt::format("gaps {}/{}, {}/{}", w.lo, cert.m, w.hi, cert.m));
    return 0;
  }
  detail::require(c.mmax >= 3, "--max must be at least 3");
  std::vector<Int> bad;
  Int total = 0;
  for (Int m = c.q; m <= c.mmax; m += 2) {
    auto cert = is_good(m);
    ++total;
    if (!cert.good) {
      bad.push_back(m);
      print_certificate(cert);
    }
  }
  fmt::print("{} odd m in [{}, {}]: {} good, {} not good\n", total, c.q, c.mmax, total - static_cast<Int>(bad.size()),
             bad.size());
  return 0;
}

int cmd_barrier(const RunConfig& c) {
  auto D = triple_of(c);
  if (c.construction == "GSH") {
    auto g = construction_gsh(D, gsh_params(c));
    auto err = check_gsh(g);
    detail::ensure(err.empty(), "GSH barrier: " + err);
    fmt::print("{}: construction GSH, chi1 order {}, chi2 order {}, t = {}, J = {}\n", D.str(), g.chi1.order(),
               g.chi2.order(), static_cast<double>(g.t), g.J);
    fmt::print("excluded ordering: {}\n",
               residues_str({g.labeled.a[g.excluded[0]], g.labeled.a[g.excluded[1]], g.labeled.a[g.excluded[2]]}));
    if (!c.out.empty()) save_gsh(g, c.out);
    return 0;
  }
  auto b = find_barrier(D, barrier_params(c), construction_choice_from_string(c.construction));
  fmt::print("{}: construction {}, |B| = {}, labeled {}\n", D.str(), to_string(b.construction), b.size(),
             b.labeled.str());
  fmt::print("excluded ordering: {}\n", residues_str(b.excluded_residues()));
  fmt::print("beta1 = {}, verification from u = {}\n", static_cast<double>(b.beta1),
             static_cast<double>(b.verification_u));
  if (c.verbose)
    for (const auto& z : b.zeros)
      fmt::print("  chi {} (order {}): {} + {}i x{}\n", z.character.index(), z.character.order(),
                 static_cast<double>(z.sigma), static_cast<double>(z.gamma), z.multiplicity);
  fmt::print("margins:\n");
  print_margins(b.margins);
  if (!c.out.empty()) save_barrier(b, c.out);
  return 0;
}

int simulate_gsh(const RunConfig& c, const GshBarrier& g) {
  long double u0 = c.u0.value_or(1e5), u1 = c.u1.value_or(2e5);
  std::size_t n = c.samples.value_or(2000);
  auto grid = gsh_simulate(g, u0, u1, n);
  auto reg2 = gsh_evaluate(g, gsh_regime2_points(g, u0, u1, std::max<std::size_t>(n / 10, 2)));
  fmt::print("grid: {} samples, regime 1 {}/{} dominated by D2, regime 2 {}/{} with D1 > 0\n", n,
             grid.regime1_dominant, grid.regime1, grid.regime2_positive, grid.regime2);
  fmt::print("regime 2 points: {}/{} with D1 > 0, min D1 = {:.6e}\n", reg2.regime2_positive, reg2.regime2,
             static_cast<double>(reg2.profile.margin));
  fmt::print("window phase <= 0.21 for {}/{} terms, max {:.4f}\n", reg2.window_terms ? reg2.window_phase_ok : 0,
             reg2.window_terms, static_cast<double>(reg2.max_window_phase));
  if (!c.out.empty()) write_text(c.out, profile_csv(grid.profile));
  bool ok = grid.profile.verified && reg2.profile.verified;
  fmt::print("verdict: {}\n", ok ? "excluded ordering absent" : "NOT VERIFIED");
  return ok ? 0 : 3;
}

int cmd_simulate(const RunConfig& c) {
  auto j = parse_json(read_text(c.file));
  if (j.value("format", std::string()) == kGshFormat) return simulate_gsh(c, gsh_from_json(j));
  auto b = barrier_from_json(j);
  auto [d0, d1] = default_window(b);
  long double u0 = c.u0.value_or(static_cast<double>(d0));
  long double u1 = c.u1.value_or(static_cast<double>(d1));
  detail::require(u1 > u0, "--u1 must exceed --u0");
  long double gmin = std::numeric_limits<long double>::infinity();
  for (const auto& z : b.zeros) gmin = std::min(gmin, z.gamma);
  long double periods = (u1 - u0) * gmin / (2.0L * std::numbers::pi_v<long double>);
  std::size_t n = c.samples.value_or(static_cast<std::size_t>(std::ceil(std::max(periods, 1.0L) * 1e4L)));
  auto prof = simulate(b, u0, u1, n);
  fmt::print("{}: construction {}, |B| = {}, u in [{}, {}], {} samples, {} crossings\n", b.triple.str(),
             to_string(b.construction), b.size(), static_cast<double>(u0), static_cast<double>(u1), n,
             prof.crossings);
  fmt::print("excluded ordering {}: {} samples\n", residues_str(b.excluded_residues()), prof.excluded_count());
  fmt::print("margin {:.6e} (main terms only {:.6e})\n", static_cast<double>(prof.margin),
             static_cast<double>(prof.main_margin));
  if (!c.out.empty()) write_text(c.out, profile_csv(prof));
  if (!prof.verified) {
    if (prof.first_counterexample)
      fmt::print("counterexample at u = {:.15g}\n", static_cast<double>(*prof.first_counterexample));
    fmt::print("verdict: NOT VERIFIED\n");
    return 3;
  }
  fmt::print("verdict: excluded ordering absent\n");
  return 0;
}

struct SweepRow {
  RaceTriple D;
  std::string construction;
  Int size = 0;
  std::string error;
  int code = 0;
};

int cmd_sweep(const RunConfig& c) {
  detail::require(c.qmax >= 5, "--qmax must be at least 5");
  auto params = barrier_params(c);
  std::vector<RaceTriple> triples;
  for (Int q = 5; q <= c.qmax; ++q) {
    if (q == 6) continue;
    auto units = UnitGroup::make(q)->units();
    for (Int a : units)
      for (Int b : units)
        for (Int d : units)
          if (a != b && a != d && b != d) triples.emplace_back(q, a, b, d);
  }
  std::vector<SweepRow> rows(triples.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::map<Int, std::shared_ptr<CharacterGroup>> groups;
    for (std::size_t i; (i = next.fetch_add(1)) < triples.size();) {
      const auto& D = triples[i];
      auto& cg = groups[D.q];
      if (!cg) cg = std::make_shared<CharacterGroup>(D.q);
      SweepRow& r = rows[i];
      r.D = D;
      try {
        auto b = find_barrier(D, *cg, params);
        r.construction = to_string(b.construction);
        r.size = b.size();
      } catch (const ConstructionError& e) {
        r.error = e.what();
        r.code = 2;
      } catch (const std::exception& e) {
        r.error = e.what();
        r.code = 3;
      }
    }
  };
  unsigned n = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  std::map<std::string, std::size_t> by_construction;
  std::size_t small = 0, failed = 0;
  int code = 0;
  std::string csv = "q,a1,a2,a3,construction,size\n";
  for (const auto& r : rows) {
    if (r.code) {
      ++failed;
      code = std::max(code, r.code);
      fmt::print(stderr, "{}: {}\n", r.D.str(), r.error);
      continue;
    }
    ++by_construction[r.construction];
    if (r.size <= 3) ++small;
    csv += fmt::format("{},{},{},{},{},{}\n", r.D.q, r.D.a[0], r.D.a[1], r.D.a[2], r.construction, r.size);
  }
  fmt::print("{} triples with q <= {}: {} barriers, {} failures\n", rows.size(), c.qmax, rows.size() - failed, failed);
  for (const auto& [k, v] : by_construction) fmt::print("  construction {:<4} {}\n", k, v);
  std::size_t built = rows.size() - failed;
  fmt::print("|B| <= 3 for {} of {} ({:.2f}%)\n", small, built, built ? 100.0 * small / built : 0.0);
  if (!c.out.empty()) write_text(c.out, csv);
  return code;
}

int cmd_gsh(const RunConfig& c) {
  auto D = triple_of(c);
  auto g = construction_gsh(D, gsh_params(c));
  auto err = check_gsh(g);
  detail::ensure(err.empty(), "GSH barrier: " + err);
  fmt::print("{}: labeled {}, chi1 order {}, chi2 order {}\n", D.str(), g.labeled.str(), g.chi1.order(),
             g.chi2.order());
  fmt::print("t = {}, alpha = {:.9f}, beta = {:.9f}, J = {}\n", static_cast<double>(g.t),
             static_cast<double>(g.alpha), static_cast<double>(g.beta_phase), g.J);
  Int gap = longest_h_gap(g.alpha, g.beta_phase, 0, 1000000);
  bool gap_ok = gap < g.gap_bound();
  fmt::print("longest run outside H in [0, 10^6]: {} (bound {}) {}\n", gap, g.gap_bound() - 1, gap_ok ? "ok" : "FAIL");
  auto fit = gsh_tail_fit(g, 10.0L, 1e9L, 33);
  fmt::print("tail sum: u^(3/4) sum e^(-delta_j u)/gamma_j^2 <= C = {:.6e}\n", static_cast<double>(fit.C));
  if (!c.out.empty()) save_gsh(g, c.out);
  RunConfig sim = c;
  sim.out.clear();
  int code = simulate_gsh(sim, g);
  return gap_ok ? code : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barriers for three-way prime number races"};
  app.set_config("--config", "", "TOML or INI file with option defaults");
  app.require_subcommand(1);
  RunConfig c;

  auto add_params = [&](CLI::App* s) {
    s->add_option("--construction", c.construction, "auto, I, II, III or GSH")
        ->check(CLI::IsMember({"auto", "I", "II", "III", "GSH"}));
    s->add_option("--sigma", c.sigma, "upper bound for zero real parts");
    s->add_option("--tau", c.tau, "lower bound for zero imaginary parts");
    s->add_option("--sigma1", c.sigma1, "real part of the leading zeros");
    s->add_option("--sigma2", c.sigma2, "real part of the secondary zeros");
    s->add_option("--beta1", c.beta1, "bound for all other zeros");
    s->add_option("--t", c.t, "height for constructions I and GSH");
    s->add_option("--gamma", c.gamma, "height for constructions II and III");
    s->add_option("--epsilon", c.epsilon, "rationalization error for construction III");
    s->add_option("--J", c.J, "truncation of the GSH family");
  };
  auto add_grid = [&](CLI::App* s) {
    s->add_option("--u0", c.u0, "start of the u = log x window");
    s->add_option("--u1", c.u1, "end of the u = log x window");
    s->add_option("--samples", c.samples, "number of grid samples");
  };
  auto add_triple = [&](CLI::App* s) {
    s->add_option("q", c.q, "modulus")->required();
    s->add_option("residues", c.residues, "a1 a2 a3")->expected(3)->required();
  };

  auto* group = app.add_subcommand("group", "unit group structure");
  group->add_option("q", c.q, "modulus")->required();
  auto* chars = app.add_subcommand("chars", "character table");
  chars->add_option("q", c.q, "modulus")->required();
  chars->add_option("residues", c.residues, "residues to tabulate (default: all units)");
  auto* good = app.add_subcommand("good", "goodness certificate of odd m");
  good->add_option("m", c.q, "odd m >= 3")->required();
  good->add_option("--max", c.mmax, "sweep odd m from m up to this bound");
  auto* barrier = app.add_subcommand("barrier", "build a barrier for (q; a1, a2, a3)");
  add_triple(barrier);
  add_params(barrier);
  auto* simulate_cmd = app.add_subcommand("simulate", "simulate the main terms of a barrier file");
  simulate_cmd->add_option("file", c.file, "barrier file")->required();
  add_grid(simulate_cmd);
  auto* sweep = app.add_subcommand("sweep", "build barriers for every triple with q <= qmax");
  sweep->add_option("--qmax", c.qmax, "largest modulus");
  sweep->add_option("--threads", c.threads, "worker threads (default: hardware)");
  add_params(sweep);
  auto* gsh = app.add_subcommand("gsh", "infinite barrier with independent ordinates");
  add_triple(gsh);
  add_params(gsh);
  add_grid(gsh);
  for (auto* s : {group, chars, good, barrier, simulate_cmd, sweep, gsh}) {
    s->add_option("--out", c.out, "output file");
    s->add_flag("-v,--verbose", c.verbose, "more detail");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*group) return cmd_group(c);
    if (*chars) return cmd_chars(c);
    if (*good) return cmd_good(c);
    if (*barrier) return cmd_barrier(c);
    if (*simulate_cmd) return cmd_simulate(c);
    if (*sweep) return cmd_sweep(c);
    if (*gsh) return cmd_gsh(c);
  } catch (const ValidationError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  } catch (const ConstructionError& e) {
    fmt::print(stderr, "construction failed: {}\n", e.what());
    return 2;
  } catch (const VerificationError& e) {
    fmt::print(stderr, "verification failed: {}\n", e.what());
    return 3;
  }
  return 1;
}
