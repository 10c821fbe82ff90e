#pragma once

#include <complex>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reslab/gcdsum.hpp"
#include "reslab/resonance_bt.hpp"

namespace reslab {

using json = nlohmann::json;

// Shared report schema emitted by the resonance commands.
struct BoundReport {
  int schema = 1;
  std::uint64_t q = 0;
  std::uint64_t N = 0;
  std::string f_spec;
  std::string method;  // "hough" | "bt" | "oracle"
  double m1 = 0.0;
  double m2 = 0.0;  // |M2| for the hough method
  double resonance_bound = 0.0;
  std::optional<double> empirical_max;
  std::optional<std::uint64_t> empirical_j;
  std::optional<double> predicted;
  double pv = 0.0;
  double burgess2 = 0.0;
  double burgess3 = 0.0;
  std::vector<std::string> regime_flags;
  json audit;  // method-specific payload; omitted when null
};

inline json to_json(const TailReport& t) {
  return json{{"eta", t.eta},
              {"threshold", t.threshold},
              {"tail", t.tail},
              {"relaxed", t.relaxed},
              {"chebyshev_factor", t.chebyshev_factor},
              {"euler_product", t.euler_product},
              {"chebyshev_ok", t.chebyshev_ok}};
}

inline json to_json(const StepAudit& a, std::size_t max_pairs = 256) {
  json pairs = json::array();
  std::size_t emitted = 0;
  for (const auto& rec : a.pairs) {
    if (emitted >= max_pairs && rec.pointwise_ok) continue;
    pairs.push_back(json{{"m", rec.m},
                         {"n", rec.n},
                         {"count", rec.count},
                         {"claim", rec.claim},
                         {"pointwise_ok", rec.pointwise_ok},
                         {"within_threshold", rec.within_threshold}});
    ++emitted;
  }
  return json{{"delta", a.delta},
              {"eta", a.eta},
              {"pairs_checked", a.pairs.size()},
              {"pointwise_violations", a.pointwise_violations},
              {"pairs_within_threshold", a.pairs_within_threshold},
              {"min_step_checks", a.min_step_checks},
              {"min_step_violations", a.min_step_violations},
              {"pairs", pairs},
              {"tail", to_json(a.tail)}};
}

inline json to_json(const FHypothesisReport& r) {
  return json{{"re_min", r.re_min},
              {"weighted_total", r.weighted_total},
              {"total_nonnegative", r.weighted_total >= 0.0},
              {"sampled", r.sampled}};
}

inline json to_json(const BtChainChecks& c) {
  return json{{"m1_plus_principal", c.m1_plus_principal},
              {"phi_times_m", c.phi_times_m},
              {"phi_times_mprime", c.phi_times_mprime},
              {"matches", c.matches},
              {"endpoint_applicable", c.endpoint_applicable},
              {"endpoint_ok", c.endpoint_ok},
              {"principal_ok", c.principal_ok}};
}

inline json to_json(const BoundReport& r) {
  json j{{"schema", r.schema},
         {"q", r.q},
         {"N", r.N},
         {"f", r.f_spec},
         {"method", r.method},
         {"M1", r.m1},
         {"M2", r.m2},
         {"resonance_bound", r.resonance_bound},
         {"pv_bound", r.pv},
         {"burgess_bound", json{{"r2", r.burgess2}, {"r3", r.burgess3}}},
         {"regime_flags", r.regime_flags}};
  if (r.empirical_max) {
    j["empirical_max"] = *r.empirical_max;
    if (r.empirical_j) j["empirical_j"] = *r.empirical_j;
  }
  if (r.predicted) j["predicted"] = *r.predicted;
  if (!r.audit.is_null()) j["audit"] = r.audit;
  return j;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace reslab
