#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "reslab/charsum.hpp"
#include "reslab/gcdsum.hpp"
#include "reslab/modular.hpp"
#include "reslab/plot.hpp"
#include "reslab/report.hpp"
#include "reslab/resonance_bt.hpp"
#include "reslab/resonance_hough.hpp"
#include "reslab/verify.hpp"

namespace reslab {

// Exit codes: 0 success, 2 usage/validation, 3 runtime/degenerate,
// 4 verify assertion failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;
inline constexpr int kExitVerifyFailed = 4;

namespace cli_detail {

inline void write_text(const std::string& path, const std::string& text,
                       std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw validation_error("cannot write output file '" + path + "'");
  f << text;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --set accepts either a file path or an inline "{a,b,c}" literal.
inline GcdSet load_set(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') {
    if (arg.back() != '}')
      throw validation_error("inline set must look like {1,2,3}");
    std::vector<std::uint64_t> members;
    std::string body = arg.substr(1, arg.size() - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto b = tok.find_first_not_of(" \t");
      if (b == std::string::npos) continue;
      const auto e = tok.find_last_not_of(" \t");
      members.push_back(detail::parse_u64(tok.substr(b, e - b + 1), "inline set"));
    }
    if (members.empty()) throw validation_error("inline set is empty");
    return make_gcd_set(std::move(members));
  }
  return read_set_file(arg);
}

inline std::pair<double, double> parse_window(const std::string& arg) {
  const auto comma = arg.find(',');
  if (comma == std::string::npos)
    throw validation_error("window: expected <pmin>,<pmax>");
  const double lo = detail::parse_double(arg.substr(0, comma), "window pmin");
  const double hi = detail::parse_double(arg.substr(comma + 1), "window pmax");
  if (!(lo >= 2.0) || !(hi >= lo))
    throw validation_error("window: need 2 <= pmin <= pmax");
  return {lo, hi};
}

inline std::vector<std::uint64_t> parse_q_list(const std::string& arg) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(detail::parse_u64(tok, "q-list"));
  }
  return out;
}

// Sieve builder honoring the optional RESONANCE_LAB_CACHE directory.
inline SpfSieve obtain_sieve(std::uint64_t limit) {
  const char* dir = std::getenv("RESONANCE_LAB_CACHE");
  if (dir == nullptr || *dir == '\0') return build_spf_sieve(limit);
  const std::string path =
      std::string(dir) + "/spf_" + std::to_string(limit) + ".bin";
  {
    std::ifstream in(path, std::ios::binary);
    if (in) {
      std::uint64_t stored = 0;
      in.read(reinterpret_cast<char*>(&stored), sizeof(stored));
      if (in && stored == limit) {
        SpfSieve s;
        s.limit = limit;
        s.spf.resize(limit + 1);
        in.read(reinterpret_cast<char*>(s.spf.data()),
                static_cast<std::streamsize>(s.spf.size() * sizeof(std::uint32_t)));
        if (in) return s;
      }
    }
  }
  SpfSieve s = build_spf_sieve(limit);
  std::ofstream out(path, std::ios::binary);
  if (out) {
    out.write(reinterpret_cast<const char*>(&s.limit), sizeof(s.limit));
    out.write(reinterpret_cast<const char*>(s.spf.data()),
              static_cast<std::streamsize>(s.spf.size() * sizeof(std::uint32_t)));
  }
  return s;
}

inline void require_prime(std::uint64_t q) {
  if (q < 3 || !is_prime(q))
    throw validation_error("q = " + std::to_string(q) + " is not an odd prime");
}

// Regime annotations shared by both resonance methods.
inline void flag_sum_regime(std::uint64_t q, std::uint64_t N,
                            std::vector<std::string>& flags) {
  const double logq = std::log(static_cast<double>(q));
  if (static_cast<double>(N) < std::exp(std::sqrt(logq)))
    flags.push_back("N below exp(sqrt(log q))");
  if (static_cast<double>(N) > std::sqrt(static_cast<double>(q)))
    flags.push_back("N above sqrt(q)");
}

struct CharsumOpts {
  std::uint64_t q = 0;
  std::uint64_t N = 0;
  std::string f = "one";
  std::int64_t chi = -1;
  bool all = false;
  bool max = false;
  std::string format = "json";
  std::string out;
};

inline int cmd_charsum(const CharsumOpts& o, std::ostream& outs) {
  require_prime(o.q);
  const MultFnSpec f = MultFnSpec::parse(o.f);
  const int modes = (o.chi >= 0 ? 1 : 0) + (o.all ? 1 : 0) + (o.max ? 1 : 0);
  if (modes != 1)
    throw validation_error("charsum: pick exactly one of --chi, --all, --max");
  const CharGroup group(make_prime_modulus(o.q));
  const SumParams params{o.N, f};
  const SpfSieve sieve = obtain_sieve(std::max<std::uint64_t>(o.N, 2));
  check_sum_params(group, params);

  json base{{"schema", 1}, {"command", "charsum"}, {"q", o.q}, {"N", o.N},
            {"f", f.to_string()}};
  std::string text;
  if (o.chi >= 0) {
    if (static_cast<std::uint64_t>(o.chi) >= group.order())
      throw validation_error("charsum: chi index must lie in [0, q-2]");
    const auto s =
        sum_single(group, params, sieve, static_cast<std::uint64_t>(o.chi));
    if (o.format == "csv") {
      text = "j,re,im,abs\n" + std::to_string(o.chi) + "," +
             format_double(s.real()) + "," + format_double(s.imag()) + "," +
             format_double(std::abs(s)) + "\n";
    } else {
      base["j"] = o.chi;
      base["sum"] = json{{"re", s.real()}, {"im", s.imag()}};
      base["abs"] = std::abs(s);
      text = dump(base);
    }
  } else if (o.all) {
    const auto values = sum_all(group, params, sieve);
    if (o.format == "csv") {
      text = "j,re,im,abs\n";
      for (std::uint64_t j = 0; j < values.size(); ++j) {
        text += std::to_string(j) + "," + format_double(values[j].real()) + "," +
                format_double(values[j].imag()) + "," +
                format_double(std::abs(values[j])) + "\n";
      }
    } else {
      json arr = json::array();
      for (std::uint64_t j = 0; j < values.size(); ++j) {
        arr.push_back(json{{"j", j},
                           {"re", values[j].real()},
                           {"im", values[j].imag()},
                           {"abs", std::abs(values[j])}});
      }
      base["sums"] = std::move(arr);
      text = dump(base);
    }
  } else {
    const auto best = max_nonprincipal(group, params, sieve);
    if (o.format == "csv") {
      text = "j,magnitude\n" + std::to_string(best.j) + "," +
             format_double(best.magnitude) + "\n";
    } else {
      base["j"] = best.j;
      base["magnitude"] = best.magnitude;
      text = dump(base);
    }
  }
  write_text(o.out, text, outs);
  return kExitOk;
}

struct ResonateOpts {
  std::uint64_t q = 0;
  std::uint64_t N = 0;
  std::string f = "one";
  std::string out;
  bool force_oracle = false;
  std::uint64_t oracle_cap = 100000;
  unsigned threads = 1;
  // hough
  std::string window;
  std::uint64_t support_cap = 200000;
  // bt
  std::string set_arg;
  std::uint64_t auto_k = 0;
  std::uint64_t pool_y = 13;
  std::uint64_t pool_b = 30030;
  std::uint64_t iters = 100;
  std::uint64_t seed = 1;
  double delta = 0.005;
  std::uint64_t coincidence_cap = 10000;
};

inline int cmd_resonate_hough(const ResonateOpts& o, std::ostream& outs) {
  require_prime(o.q);
  const MultFnSpec f = MultFnSpec::parse(o.f);
  std::optional<std::pair<double, double>> window;
  if (!o.window.empty()) window = parse_window(o.window);
  const HoughResonator res = build_resonator(o.q, o.N, window, o.support_cap);

  BoundReport rep;
  rep.q = o.q;
  rep.N = o.N;
  rep.f_spec = f.to_string();
  rep.method = "hough";
  rep.pv = pv_bound(o.q);
  rep.burgess2 = burgess_bound(o.q, o.N, 2);
  rep.burgess3 = burgess_bound(o.q, o.N, 3);
  flag_sum_regime(o.q, o.N, rep.regime_flags);
  if (!res.lambda_in_regime)
    rep.regime_flags.push_back("Y = q/N below e^e; lambda outside regime");
  if (res.support.size() == 1)
    rep.regime_flags.push_back("window holds no usable primes; resonator is trivial");

  const M2MainLower main_term = m2_main_lower(res, o.N);

  json audit{{"lambda", res.lambda},
             {"Y", res.Y},
             {"window", json{{"pmin", res.p_min}, {"pmax", res.p_max}}},
             {"window_overridden", res.window_overridden},
             {"support_size", res.support.size()},
             {"sum_r", res.sum_r()},
             {"sum_r2", res.sum_r2()},
             {"m2_main_full", main_term.full},
             {"m2_main_ratio", main_term.ratio}};

  const bool oracle = o.force_oracle || o.q <= o.oracle_cap;
  if (oracle) {
    const CharGroup group(make_prime_modulus(o.q));
    const Dft plan(group.order());
    const SpfSieve sieve = obtain_sieve(std::max<std::uint64_t>(
        {o.N, static_cast<std::uint64_t>(res.Y) + 1, 2}));
    const SumParams params{o.N, f};
    audit["m1_upper"] = m1_upper(group.modulus(), res);
    const HoughMoments mom =
        exact_moments(group, params, res, sieve, plan, o.threads);
    rep.m1 = mom.m1;
    rep.m2 = std::abs(mom.m2);
    rep.resonance_bound = mom.m1 > 0.0 ? std::abs(mom.m2) / mom.m1 : 0.0;
    audit["exact_m2"] = json{{"re", mom.m2.real()}, {"im", mom.m2.imag()}};
    audit["principal"] = json{{"s0_abs", std::abs(mom.s0)},
                              {"r0_abs", std::abs(mom.r0)}};
    const auto best = max_from_values(sum_all(group, params, sieve, plan));
    rep.empirical_max = best.magnitude;
    rep.empirical_j = best.j;
  } else {
    rep.regime_flags.push_back(
        "q above the oracle cap; exact moments and empirical max skipped");
  }

  try {
    const Thm11Prediction pred = predicted_bound_thm11(o.q, o.N);
    rep.predicted = pred.value;
    audit["thm11"] = json{{"A", pred.A},
                          {"tau", pred.tau},
                          {"tau_prime", pred.tau_prime}};
    for (const auto& fl : pred.flags) rep.regime_flags.push_back(fl);
  } catch (const validation_error& e) {
    rep.regime_flags.push_back(std::string("thm11 prediction unavailable: ") +
                               e.what());
  }
  rep.audit = std::move(audit);
  write_text(o.out, dump(to_json(rep)), outs);
  return kExitOk;
}

inline int cmd_resonate_bt(const ResonateOpts& o, std::ostream& outs) {
  require_prime(o.q);
  const MultFnSpec f = MultFnSpec::parse(o.f);
  if (o.set_arg.empty() && o.auto_k == 0)
    throw validation_error("resonate bt: provide --set or --auto-k");
  if (!o.set_arg.empty() && o.auto_k != 0)
    throw validation_error("resonate bt: --set and --auto-k are exclusive");
  if (!(o.q <= o.oracle_cap || o.force_oracle))
    throw compute_error(
        "resonate bt: q above the oracle cap; rerun with --force-oracle");

  std::uint64_t sieve_limit = std::max<std::uint64_t>(o.N, 2);
  GcdSet set = [&] {
    if (!o.set_arg.empty()) return load_set(o.set_arg);
    const SpfSieve pool_sieve = obtain_sieve(std::max<std::uint64_t>(o.pool_b, 2));
    return greedy_search(o.auto_k,
                         SearchConfig{o.pool_y, o.pool_b, o.iters, o.seed},
                         pool_sieve);
  }();
  sieve_limit = std::max(sieve_limit, set.members.back());
  if (sieve_limit > kDefaultSieveCap)
    throw validation_error("resonate bt: set members exceed the sieve cap");
  const SpfSieve sieve = obtain_sieve(sieve_limit);

  const auto part = partition_residues(set, o.q);
  const auto resonator = build_bt_resonator(part);
  const CharGroup group(make_prime_modulus(o.q));
  const Dft plan(group.order());
  const SumParams params{o.N, f};
  const BtMoments mom = bt_moments(group, params, resonator, sieve, plan, o.threads);

  BoundReport rep;
  rep.q = o.q;
  rep.N = o.N;
  rep.f_spec = f.to_string();
  rep.method = "bt";
  rep.m1 = mom.m1;
  rep.m2 = mom.m2;
  rep.resonance_bound = bt_lower_bound(mom.m1, mom.m2);
  rep.pv = pv_bound(o.q);
  rep.burgess2 = burgess_bound(o.q, o.N, 2);
  rep.burgess3 = burgess_bound(o.q, o.N, 3);
  flag_sum_regime(o.q, o.N, rep.regime_flags);
  if (!part.dropped.empty())
    rep.regime_flags.push_back(std::to_string(part.dropped.size()) +
                               " member(s) divisible by q were dropped");

  const auto best = max_from_values(sum_all(group, params, sieve, plan));
  rep.empirical_max = best.magnitude;
  rep.empirical_j = best.j;

  try {
    const Thm12Prediction pred = predicted_bound_thm12(o.q, o.N, o.delta);
    rep.predicted = pred.value;
    for (const auto& fl : pred.flags) rep.regime_flags.push_back(fl);
  } catch (const validation_error& e) {
    rep.regime_flags.push_back(std::string("thm12 prediction unavailable: ") +
                               e.what());
  }

  const StepAudit audit = step_inequality_audit(set, o.q, o.N, o.delta);
  const CoincidenceSample sample =
      sample_coincidences(resonator, o.q, o.N, o.coincidence_cap);
  json audit_json = to_json(audit);
  if (!sample.entries.empty())
    audit_json["f_hypothesis"] = to_json(audit_f_hypothesis(f, sample, sieve));
  audit_json["chain"] = to_json(bt_chain_checks(mom, resonator, o.q, o.N));
  audit_json["set"] = json{{"K", set.members.size()},
                           {"y_M", set.y_m},
                           {"classes", resonator.reps.size()},
                           {"default_K_floor_q_over_N", o.q / o.N}};
  if (set.members.size() != o.q / o.N)
    rep.regime_flags.push_back("|M| differs from floor(q/N)");
  rep.audit = std::move(audit_json);
  write_text(o.out, dump(to_json(rep)), outs);
  return kExitOk;
}

struct GcdOpts {
  std::string set_arg;
  std::uint64_t k = 0;
  std::uint64_t pool_y = 13;
  std::uint64_t pool_b = 30030;
  std::uint64_t iters = 100;
  std::uint64_t seed = 1;
  bool tail = false;
  std::uint64_t tail_n = 0;
  double eta = 0.0;
  std::string out;       // JSON report
  std::string save_set;  // search only
  unsigned threads = 1;
};

inline int cmd_gcdsum(const GcdOpts& o, bool search, std::ostream& outs) {
  if (o.eta != 0.0 && !(o.eta > 0.0 && o.eta < 0.5))
    throw validation_error("gcdsum: eta must lie in (0, 1/2)");
  GcdSet set = [&] {
    if (search) {
      const SpfSieve sieve = obtain_sieve(std::max<std::uint64_t>(o.pool_b, 2));
      return greedy_search(o.k, SearchConfig{o.pool_y, o.pool_b, o.iters, o.seed},
                           sieve);
    }
    if (o.set_arg.empty()) throw validation_error("gcdsum eval: provide --set");
    return load_set(o.set_arg);
  }();

  const double g = gcd_sum(set, o.threads);
  json j{{"schema", 1},
         {"command", "gcdsum"},
         {"mode", search ? "search" : "eval"},
         {"K", set.members.size()},
         {"G", g},
         {"normalized", g / static_cast<double>(set.members.size())},
         {"y_M", set.y_m}};
  std::vector<std::string> flags;
  try {
    j["bt_exponent"] = bt_exponent(set.members.size());
    j["bt_reference"] = std::exp(bt_exponent(set.members.size()));
  } catch (const validation_error&) {
    flags.push_back("K outside the bt_exponent regime (needs log_3 K > 0)");
  }
  if (search) {
    j["pool"] = json{{"y", o.pool_y}, {"B", o.pool_b}, {"iterations", o.iters},
                     {"seed", o.seed}};
    flags.push_back("pool smoothness y is an experimental knob");
    json members = json::array();
    for (std::uint64_t m : set.members) members.push_back(m);
    j["members"] = std::move(members);
    if (!o.save_set.empty()) write_set_file(o.save_set, set);
  }
  if (o.tail) {
    if (o.tail_n == 0 || o.eta == 0.0)
      throw validation_error("gcdsum: --tail needs --n and --eta");
    j["tail"] = to_json(tail_check(set, o.tail_n, o.eta));
  }
  j["flags"] = flags;
  write_text(o.out, dump(j), outs);
  return kExitOk;
}

struct VerifyOpts {
  std::string suite;
  std::string q_list;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string out;
};

inline int cmd_verify(const VerifyOpts& o, std::ostream& outs) {
  VerifyOptions vo;
  vo.seed = o.seed;
  vo.threads = o.threads;
  if (!o.q_list.empty()) vo.q_list = parse_q_list(o.q_list);
  const auto results = run_verify_suites(o.suite, vo);
  bool ok = true;
  json arr = json::array();
  for (const auto& r : results) {
    ok = ok && r.ok();
    json fj = json::array();
    for (const auto& f : r.failures) fj.push_back(f);
    arr.push_back(json{{"suite", r.suite},
                       {"checks", r.checks},
                       {"failures", std::move(fj)},
                       {"ok", r.ok()}});
  }
  json j{{"schema", 1}, {"command", "verify"}, {"results", std::move(arr)},
         {"ok", ok}};
  write_text(o.out, dump(j), outs);
  return ok ? kExitOk : kExitVerifyFailed;
}

struct PlotOpts {
  std::uint64_t q = 0;
  std::string f = "one";
  std::string n_grid;
  std::string out;
  bool no_oracle = false;
  bool x_linear = false;
  std::uint64_t oracle_cap = 100000;
  std::uint64_t pool_y = 31;
  std::uint64_t pool_b = 0;  // 0 -> min(q - 1, 10^6)
  std::uint64_t seed = 1;
  std::string window = "2,31";
  std::uint64_t support_cap = 200000;
  unsigned threads = 1;
};

inline int cmd_plot(const PlotOpts& o, std::ostream& outs) {
  require_prime(o.q);
  const MultFnSpec f = MultFnSpec::parse(o.f);
  if (o.out.empty()) throw validation_error("plot: --out is required");
  if (!o.no_oracle && o.q > o.oracle_cap)
    throw compute_error("plot: q above the oracle cap; rerun with --no-oracle");
  const auto grid = geometric_grid(o.n_grid, o.q);
  const std::uint64_t pool_b =
      o.pool_b != 0 ? o.pool_b
                    : std::min<std::uint64_t>(o.q - 1, 1000000);
  const auto window = parse_window(o.window);

  const CharGroup group(make_prime_modulus(o.q));
  const Dft plan(group.order());
  const SpfSieve sieve =
      obtain_sieve(std::max<std::uint64_t>({pool_b, grid.back(), o.q, 2}));
  const auto pool =
      build_smooth_pool(SearchConfig{o.pool_y, pool_b, 0, o.seed}, sieve);

  std::vector<PlotRow> rows;
  for (std::uint64_t N : grid) {
    PlotRow row;
    row.N = N;
    const SumParams params{N, f};
    if (!o.no_oracle) {
      const auto best = max_from_values(sum_all(group, params, sieve, plan));
      row.empirical_max = best.magnitude;
    }
    // bt with the default |M| = floor(q/N), capped by the pool.
    const std::uint64_t want_k =
        std::min<std::uint64_t>(o.q / N, pool.size());
    if (want_k >= 1) {
      const GcdSet set = greedy_search(
          want_k, SearchConfig{o.pool_y, pool_b, 0, o.seed}, sieve);
      const auto part = partition_residues(set, o.q);
      const auto resonator = build_bt_resonator(part);
      const auto mom =
          bt_moments(group, params, resonator, sieve, plan, o.threads);
      row.bt_bound = bt_lower_bound(mom.m1, mom.m2);
    }
    {
      const auto resonator = build_resonator(o.q, N, window, o.support_cap);
      const auto mom =
          exact_moments(group, params, resonator, sieve, plan, o.threads);
      if (mom.m1 > 0.0) row.hough_bound = std::abs(mom.m2) / mom.m1;
    }
    try {
      row.thm11 = predicted_bound_thm11(o.q, N).value;
    } catch (const validation_error&) {
    }
    try {
      row.thm12 = predicted_bound_thm12(o.q, N).value;
    } catch (const validation_error&) {
    }
    row.pv = pv_bound(o.q);
    row.burgess2 = burgess_bound(o.q, N, 2);
    rows.push_back(row);
  }

  const std::string csv = render_csv(rows);
  std::string csv_path = o.out;
  if (csv_path.size() >= 4 && csv_path.substr(csv_path.size() - 4) == ".svg")
    csv_path = csv_path.substr(0, csv_path.size() - 4) + ".csv";
  else
    csv_path += ".csv";
  const std::string title = "reslab q=" + std::to_string(o.q) + " f=" +
                            f.to_string();
  write_text(o.out, render_svg(rows, title, !o.x_linear), outs);
  write_text(csv_path, csv, outs);
  json j{{"schema", 1}, {"command", "plot"}, {"svg", o.out},
         {"csv", csv_path}, {"rows", rows.size()}};
  outs << dump(j);
  return kExitOk;
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args,
                   std::ostream& outs = std::cout,
                   std::ostream& errs = std::cerr) {
  using namespace cli_detail;
  CLI::App app{
      "reslab: twisted character sums, resonance lower bounds, and GCD-sum "
      "experiments over prime moduli.\nAll logarithms are natural; log2/log3 "
      "denote the iterated logarithm."};
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker cap for parallel reductions")
      ->capture_default_str();

  CharsumOpts cs;
  auto* sc_charsum =
      app.add_subcommand("charsum", "evaluate S_chi(N) = sum f(n) chi(n)");
  sc_charsum->add_option("--q", cs.q, "prime modulus")->required();
  sc_charsum->add_option("--N", cs.N, "sum length, 1 <= N < q")->required();
  sc_charsum->add_option("--f", cs.f,
                         "one | nit:<t> | steinhaus:<seed> | arc:<seed>:<eps>")
      ->capture_default_str();
  sc_charsum->add_option("--chi", cs.chi, "single character index");
  sc_charsum->add_flag("--all", cs.all, "all characters at once");
  sc_charsum->add_flag("--max", cs.max, "maximizing non-principal character");
  sc_charsum->add_option("--format", cs.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sc_charsum->add_option("--out", cs.out, "output path (default stdout)");

  ResonateOpts ro;
  auto* sc_resonate = app.add_subcommand("resonate", "resonance lower bounds");
  sc_resonate->require_subcommand(1);
  auto* sc_hough = sc_resonate->add_subcommand(
      "hough", "multiplicative-window resonator and |M2|/M1");
  auto* sc_bt = sc_resonate->add_subcommand(
      "bt", "residue-partition resonator and sqrt(M2/M1)");
  for (auto* sc : {sc_hough, sc_bt}) {
    sc->add_option("--q", ro.q, "prime modulus")->required();
    sc->add_option("--N", ro.N, "sum length, 1 <= N < q")->required();
    sc->add_option("--f", ro.f, "coefficient function spec")
        ->capture_default_str();
    sc->add_option("--out", ro.out, "output path (default stdout)");
    sc->add_flag("--force-oracle", ro.force_oracle,
                 "run exact moments and the empirical max above the cap");
    sc->add_option("--oracle-cap", ro.oracle_cap,
                   "largest q for which the oracle runs by default")
        ->capture_default_str();
  }
  sc_hough->add_option("--window", ro.window,
                       "override the prime window as <pmin>,<pmax>");
  sc_hough->add_option("--support-cap", ro.support_cap,
                       "enumeration cap for the resonator support")
      ->capture_default_str();
  sc_bt->add_option("--set", ro.set_arg, "set file, or inline {a,b,c}");
  sc_bt->add_option("--auto-k", ro.auto_k, "build the set by greedy search");
  sc_bt->add_option("--pool-y", ro.pool_y, "pool smoothness")
      ->capture_default_str();
  sc_bt->add_option("--pool-b", ro.pool_b, "pool bound")->capture_default_str();
  sc_bt->add_option("--iters", ro.iters, "hill-climb swap budget")
      ->capture_default_str();
  sc_bt->add_option("--seed", ro.seed, "search seed")->capture_default_str();
  sc_bt->add_option("--delta", ro.delta, "audit delta in (0, 1/100)")
      ->capture_default_str();
  sc_bt->add_option("--coincidence-cap", ro.coincidence_cap,
                    "sample cap for the f hypothesis audit")
      ->capture_default_str();

  GcdOpts go;
  auto* sc_gcd = app.add_subcommand("gcdsum", "Gal-type GCD sums");
  sc_gcd->require_subcommand(1);
  auto* sc_eval = sc_gcd->add_subcommand("eval", "evaluate G(M) for a set");
  auto* sc_search =
      sc_gcd->add_subcommand("search", "hill-climb a K-subset of a smooth pool");
  sc_eval->add_option("--set", go.set_arg, "set file, or inline {a,b,c}");
  sc_search->add_option("--k", go.k, "target cardinality")->required();
  sc_search->add_option("--pool-y", go.pool_y, "pool smoothness")
      ->capture_default_str();
  sc_search->add_option("--pool-b", go.pool_b, "pool bound")
      ->capture_default_str();
  sc_search->add_option("--iters", go.iters, "hill-climb swap budget")
      ->capture_default_str();
  sc_search->add_option("--seed", go.seed, "search seed")->capture_default_str();
  sc_search->add_option("--save-set", go.save_set, "write the set as a file");
  for (auto* sc : {sc_eval, sc_search}) {
    sc->add_flag("--tail", go.tail, "tail report (needs --n and --eta)");
    sc->add_option("--n", go.tail_n, "tail threshold length N");
    sc->add_option("--eta", go.eta, "tail exponent in (0, 1/2)");
    sc->add_option("--out", go.out, "output path (default stdout)");
  }

  VerifyOpts vo;
  auto* sc_verify = app.add_subcommand("verify", "identity suites");
  sc_verify
      ->add_option("--suite", vo.suite,
                   "orthogonality|parseval|batch_naive|resonance|e1|counts|"
                   "gcd|all")
      ->required();
  sc_verify->add_option("--q-list", vo.q_list, "comma-separated moduli");
  sc_verify->add_option("--seed", vo.seed, "suite seed")->capture_default_str();
  sc_verify->add_option("--out", vo.out, "output path (default stdout)");

  PlotOpts po;
  auto* sc_plot =
      app.add_subcommand("plot", "bounds over an N grid as SVG + CSV");
  sc_plot->add_option("--q", po.q, "prime modulus")->required();
  sc_plot->add_option("--f", po.f, "coefficient function spec")
      ->capture_default_str();
  sc_plot->add_option("--n-grid", po.n_grid, "geometric grid <start>:<end>:<count>")
      ->required();
  sc_plot->add_option("--out", po.out, "output SVG path")->required();
  sc_plot->add_flag("--no-oracle", po.no_oracle, "skip the empirical maximum");
  sc_plot->add_flag("--x-linear", po.x_linear, "linear x axis instead of log");
  sc_plot->add_option("--pool-y", po.pool_y, "bt pool smoothness")
      ->capture_default_str();
  sc_plot->add_option("--pool-b", po.pool_b, "bt pool bound (0: min(q-1, 1e6))");
  sc_plot->add_option("--seed", po.seed, "bt pool seed")->capture_default_str();
  sc_plot->add_option("--window", po.window, "hough window <pmin>,<pmax>")
      ->capture_default_str();
  sc_plot->add_option("--oracle-cap", po.oracle_cap,
                      "largest q for which the oracle runs by default")
      ->capture_default_str();

  std::vector<const char*> argv;
  argv.push_back("reslab");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, outs, errs);
      return kExitOk;
    }
    errs << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    cs.format = cs.format.empty() ? "json" : cs.format;
    ro.threads = threads;
    go.threads = threads;
    vo.threads = threads;
    po.threads = threads;
    if (sc_charsum->parsed()) return cmd_charsum(cs, outs);
    if (sc_resonate->parsed()) {
      if (sc_hough->parsed()) return cmd_resonate_hough(ro, outs);
      return cmd_resonate_bt(ro, outs);
    }
    if (sc_gcd->parsed()) return cmd_gcdsum(go, sc_search->parsed(), outs);
    if (sc_verify->parsed()) return cmd_verify(vo, outs);
    if (sc_plot->parsed()) return cmd_plot(po, outs);
    errs << "error: no subcommand selected\n";
    return kExitUsage;
  } catch (const validation_error& e) {
    errs << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const compute_error& e) {
    errs << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace reslab
