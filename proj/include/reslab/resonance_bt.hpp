#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "reslab/charsum.hpp"
#include "reslab/gcdsum.hpp"
#include "reslab/util.hpp"

namespace reslab {

// Residue-class decomposition of a set mod q: M_j = {m in M : m = j (mod q)}
// for j in [1, q-1], with representatives m' = min M_j sorted ascending.
// Members divisible by q cannot carry character mass and are dropped with a
// record.
struct ResiduePartition {
  std::uint64_t q = 0;
  std::vector<std::uint64_t> reps;        // M', ascending
  std::vector<std::uint64_t> residues;    // rep mod q, aligned with reps
  std::vector<std::vector<std::uint64_t>> classes;  // members per class
  std::vector<std::uint64_t> dropped;     // multiples of q
  std::uint64_t total = 0;                // sum of class sizes
};

inline ResiduePartition partition_residues(const GcdSet& set, std::uint64_t q) {
  if (!is_prime(q) || q < 3)
    throw validation_error("partition_residues: q must be an odd prime");
  ResiduePartition part;
  part.q = q;
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_residue;
  for (std::uint64_t m : set.members) {
    const std::uint64_t r = m % q;
    if (r == 0) {
      part.dropped.push_back(m);
      continue;
    }
    by_residue[r].push_back(m);
  }
  if (by_residue.empty())
    throw compute_error(
        "partition_residues: every member is divisible by q (empty partition)");
  for (auto& [r, cls] : by_residue) {
    std::sort(cls.begin(), cls.end());
    part.reps.push_back(cls.front());
    part.residues.push_back(r);
    part.total += cls.size();
    part.classes.push_back(std::move(cls));
  }
  // Sort by representative; residues stay aligned.
  std::vector<std::size_t> order(part.reps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return part.reps[a] < part.reps[b];
  });
  ResiduePartition sorted;
  sorted.q = part.q;
  sorted.dropped = std::move(part.dropped);
  sorted.total = part.total;
  for (std::size_t i : order) {
    sorted.reps.push_back(part.reps[i]);
    sorted.residues.push_back(part.residues[i]);
    sorted.classes.push_back(std::move(part.classes[i]));
  }
  return sorted;
}

// Resonator coefficients r(m') = sqrt(|M_j|) on the representatives.
struct BtResonator {
  std::vector<std::uint64_t> reps;
  std::vector<std::uint64_t> residues;
  std::vector<std::uint64_t> class_size;  // coeff^2, exactly
  std::vector<double> coeff;
  std::uint64_t total = 0;  // sum class_size = |M| after drops

  double sum_r() const {
    KahanSum s;
    for (double r : coeff) s.add(r);
    return s.value();
  }
};

inline BtResonator build_bt_resonator(const ResiduePartition& part) {
  if (part.reps.empty())
    throw validation_error("build_bt_resonator: empty partition");
  BtResonator res;
  res.reps = part.reps;
  res.residues = part.residues;
  res.total = part.total;
  for (const auto& cls : part.classes) {
    res.class_size.push_back(cls.size());
    res.coeff.push_back(std::sqrt(static_cast<double>(cls.size())));
  }
  return res;
}

struct BtMoments {
  double m1 = 0.0;  // sum_{chi != chi0} |R_chi|^2
  double m2 = 0.0;  // sum_{chi != chi0} |S_chi(N)|^2 |R_chi|^2
  std::complex<double> s0;
  std::complex<double> r0;
  double sum_r2 = 0.0;  // |M| after drops, as a double
};

inline BtMoments bt_moments(const CharGroup& group, const SumParams& params,
                            const BtResonator& res, const SpfSieve& sieve,
                            const Dft& plan, unsigned threads = 1) {
  check_sum_params(group, params);
  if (plan.length() != group.order())
    throw validation_error("bt_moments: plan length does not match q - 1");
  const PrimeModulus& mod = group.modulus();
  const auto svals = sum_all(group, params, sieve, plan);
  std::vector<std::complex<double>> buckets(group.order());
  for (std::size_t i = 0; i < res.reps.size(); ++i) {
    buckets[mod.ind[res.residues[i]]] +=
        res.coeff[i] * f_eval(params.f, res.reps[i], sieve);
  }
  const auto rvals = plan(buckets);

  BtMoments out;
  out.s0 = svals[0];
  out.r0 = rvals[0];
  out.sum_r2 = static_cast<double>(res.total);
  const std::size_t order = group.order();
  out.m1 = block_sum(order - 1, 4096, threads, [&](std::size_t lo, std::size_t hi) {
    KahanSum s;
    for (std::size_t t = lo; t < hi; ++t) s.add(std::norm(rvals[t + 1]));
    return s.value();
  });
  out.m2 = block_sum(order - 1, 4096, threads, [&](std::size_t lo, std::size_t hi) {
    KahanSum s;
    for (std::size_t t = lo; t < hi; ++t)
      s.add(std::norm(svals[t + 1]) * std::norm(rvals[t + 1]));
    return s.value();
  });
  return out;
}

// The resonance lower bound sqrt(M2 / M1).
inline double bt_lower_bound(double m1, double m2) {
  if (!(m1 > 0.0))
    throw compute_error("bt_lower_bound: degenerate resonator (M1 = 0)");
  if (m2 < 0.0) throw validation_error("bt_lower_bound: M2 must be nonnegative");
  return std::sqrt(m2 / m1);
}

// #{k, l <= N : m k = n l} = floor(N gcd(m,n) / max(m,n)); solutions are
// k = (n/g) t, l = (m/g) t.
inline std::uint64_t count_pairs(std::uint64_t m, std::uint64_t n,
                                 std::uint64_t N) {
  if (m == 0 || n == 0 || N == 0)
    throw validation_error("count_pairs: arguments must be positive");
  const std::uint64_t g = std::gcd(m, n);
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(N) * g /
                                    std::max(m, n));
}

// Per-pair record of the pointwise proof steps. Pairs are iterated
// unordered (m <= n); both sides of each step are symmetric in (m, n).
struct PairStepCheck {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t count = 0;     // exact coincidence count
  double claim = 0.0;          // (N / sqrt 2) sqrt((m,n)/[m,n])
  bool pointwise_ok = false;   // count >= claim
  bool within_threshold = false;  // [m,n]/(m,n) <= N^2/2
};

struct StepAudit {
  double delta = 0.0;
  double eta = 0.0;  // delta / 3
  std::vector<PairStepCheck> pairs;
  std::size_t pointwise_violations = 0;
  std::size_t pairs_within_threshold = 0;
  std::size_t min_step_checks = 0;
  std::size_t min_step_violations = 0;
  TailReport tail;
};

// Treats the pointwise steps of the second-moment chain as hypotheses and
// records the outcome for every unordered pair. Violations of the
// coincidence-count step are possible for skewed pairs and are reported,
// never assumed absent; the min-coefficient step is checked over sampled
// coincidences of the residue partition.
inline StepAudit step_inequality_audit(const GcdSet& set, std::uint64_t q,
                                       std::uint64_t N, double delta,
                                       std::size_t min_step_cap = 20000) {
  if (!(delta > 0.0 && delta < 0.01))
    throw validation_error("step_inequality_audit: delta must lie in (0, 1/100)");
  if (N == 0) throw validation_error("step_inequality_audit: N must be positive");
  StepAudit audit;
  audit.delta = delta;
  audit.eta = delta / 3.0;
  const double nd = static_cast<double>(N);
  const double threshold = nd * nd / 2.0;
  const auto& v = set.members;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i; j < v.size(); ++j) {
      PairStepCheck rec;
      rec.m = v[i];
      rec.n = v[j];
      rec.count = count_pairs(rec.m, rec.n, N);
      const std::uint64_t g = std::gcd(rec.m, rec.n);
      const double inv_ratio =
          static_cast<double>(rec.m / g) * static_cast<double>(rec.n / g);
      rec.claim = nd / std::sqrt(2.0) / std::sqrt(inv_ratio);
      rec.pointwise_ok =
          static_cast<double>(rec.count) >= rec.claim * (1.0 - 1e-12);
      rec.within_threshold = inv_ratio <= threshold;
      if (!rec.pointwise_ok) ++audit.pointwise_violations;
      if (rec.within_threshold) ++audit.pairs_within_threshold;
      audit.pairs.push_back(rec);
    }
  }

  // min{r(m')^2, r(n')^2} >= #{(m, n) in M_i x M_j : m k = n l} for each
  // coincidence (k, l); checked over the partition, deterministically
  // enumerated up to the cap.
  const auto part = partition_residues(set, q);
  for (std::size_t a = 0; a < part.reps.size(); ++a) {
    for (std::size_t b = 0; b < part.reps.size(); ++b) {
      const std::uint64_t mp = part.reps[a];
      const std::uint64_t np = part.reps[b];
      const std::uint64_t inv_np =
          pow_mod(np % q, q - 2, q);  // np is coprime to q
      for (std::uint64_t kk = 1;
           kk <= N && audit.min_step_checks < min_step_cap; ++kk) {
        std::uint64_t l0 =
            mul_mod(mul_mod(mp % q, kk % q, q), inv_np, q);
        if (l0 == 0) l0 = q;  // l must be >= 1; l = q satisfies q | mp*k - np*l
        for (std::uint64_t ll = l0;
             ll <= N && audit.min_step_checks < min_step_cap; ll += q) {
          std::uint64_t coincidences = 0;
          for (std::uint64_t m : part.classes[a]) {
            const unsigned __int128 prod = static_cast<unsigned __int128>(m) * kk;
            if (prod % ll != 0) continue;
            const std::uint64_t n_target =
                static_cast<std::uint64_t>(prod / ll);
            if (std::binary_search(part.classes[b].begin(),
                                   part.classes[b].end(), n_target))
              ++coincidences;
          }
          ++audit.min_step_checks;
          const std::uint64_t min_sq =
              std::min(part.classes[a].size(), part.classes[b].size());
          if (coincidences > min_sq) ++audit.min_step_violations;
        }
      }
    }
  }

  audit.tail = tail_check(set, N, audit.eta);
  return audit;
}

// Off-diagonal coincidences (m'k, n'l) with q | m'k - n'l and m'k != n'l,
// weighted r(m') r(n'), sampled deterministically up to the cap. This is the
// finite family on which the positivity hypothesis Re f(m) conj(f(n)) >= c is
// evaluated. The factors are kept separate so f can be evaluated through
// complete multiplicativity without sieving the products.
struct CoincidenceSample {
  struct Entry {
    std::uint64_t mp = 0, k = 0, np = 0, l = 0;
    double weight = 0.0;  // r(m') r(n')
  };
  std::vector<Entry> entries;
};

inline CoincidenceSample sample_coincidences(const BtResonator& res,
                                             std::uint64_t q, std::uint64_t N,
                                             std::size_t cap = 10000) {
  CoincidenceSample out;
  for (std::size_t a = 0; a < res.reps.size() && out.entries.size() < cap; ++a) {
    for (std::size_t b = 0; b < res.reps.size() && out.entries.size() < cap;
         ++b) {
      const std::uint64_t mp = res.reps[a];
      const std::uint64_t np = res.reps[b];
      const std::uint64_t inv_np = pow_mod(np % q, q - 2, q);
      for (std::uint64_t kk = 1; kk <= N && out.entries.size() < cap; ++kk) {
        std::uint64_t l0 = mul_mod(mul_mod(mp % q, kk % q, q), inv_np, q);
        if (l0 == 0) l0 = q;
        for (std::uint64_t ll = l0; ll <= N && out.entries.size() < cap;
             ll += q) {
          if (static_cast<unsigned __int128>(mp) * kk ==
              static_cast<unsigned __int128>(np) * ll)
            continue;
          out.entries.push_back({mp, kk, np, ll, res.coeff[a] * res.coeff[b]});
        }
      }
    }
  }
  return out;
}

// Empirical report on Re f(m'k) conj(f(n'l)) over a coincidence sample;
// arg f(m'k) = arg f(m') + arg f(k), so the sieve only needs the factors.
struct FHypothesisReport {
  double re_min = 1.0;
  double weighted_total = 0.0;  // sum of 2 r(m')r(n') Re f(m'k) conj(f(n'l))
  std::size_t sampled = 0;
};

inline FHypothesisReport audit_f_hypothesis(const MultFnSpec& f,
                                            const CoincidenceSample& sample,
                                            const SpfSieve& sieve) {
  FHypothesisReport rep;
  KahanSum total;
  for (const auto& e : sample.entries) {
    const double re =
        std::cos(f_angle(f, e.mp, sieve) + f_angle(f, e.k, sieve) -
                 f_angle(f, e.np, sieve) - f_angle(f, e.l, sieve));
    rep.re_min = std::min(rep.re_min, re);
    total.add(2.0 * e.weight * re);
  }
  rep.weighted_total = total.value();
  rep.sampled = sample.entries.size();
  return rep;
}

struct Thm12Prediction {
  double value = 0.0;
  std::vector<std::string> flags;
};

// Main term sqrt(N) exp(sqrt 2 sqrt(log(q/N) log_3(q/N) / log_2(q/N))) with
// the o(1) set to zero. Requires log_3(q/N) > 0.
inline Thm12Prediction predicted_bound_thm12(std::uint64_t q, std::uint64_t N,
                                             double delta = 0.005) {
  if (!(delta > 0.0 && delta < 0.01))
    throw validation_error("predicted_bound_thm12: delta must lie in (0, 1/100)");
  if (q < 3 || N == 0 || N >= q)
    throw validation_error("predicted_bound_thm12: need 1 <= N < q");
  const double x = static_cast<double>(q) / static_cast<double>(N);
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  if (!(l2 > 0.0))
    throw validation_error("predicted_bound_thm12: log_2(q/N) <= 0, outside regime");
  const double l3 = std::log(l2);
  if (!(l3 > 0.0))
    throw validation_error("predicted_bound_thm12: log_3(q/N) <= 0, outside regime");
  Thm12Prediction out;
  out.value = std::sqrt(static_cast<double>(N)) *
              std::exp(std::sqrt(2.0) * std::sqrt(l1 * l3 / l2));
  const double logq = std::log(static_cast<double>(q));
  if (static_cast<double>(N) < std::exp(std::pow(logq, 0.5 + delta)))
    out.flags.push_back("N below exp((log q)^{1/2+delta})");
  if (static_cast<double>(N) > std::sqrt(static_cast<double>(q)))
    out.flags.push_back("N above sqrt(q)");
  return out;
}

// Which identity the exact first-moment chain matches, and the endpoint
// checks that hold unconditionally.
struct BtChainChecks {
  double m1_plus_principal = 0.0;  // M1 + |R_{chi0}|^2
  double phi_times_m = 0.0;        // phi(q) |M|   (sum of class sizes)
  double phi_times_mprime = 0.0;   // phi(q) |M'|
  std::string matches;             // "phi(q)*|M|", "phi(q)*|M'|", or "neither"
  bool endpoint_applicable = false;  // |M| == floor(q/N)
  bool endpoint_ok = true;           // M1 <= q^2/N when applicable
  bool principal_ok = false;         // |S0|^2 |R0|^2 <= N^2 (sum r)^2
};

inline BtChainChecks bt_chain_checks(const BtMoments& mom,
                                     const BtResonator& res, std::uint64_t q,
                                     std::uint64_t N) {
  BtChainChecks chk;
  const double phi = static_cast<double>(q - 1);
  chk.m1_plus_principal = mom.m1 + std::norm(mom.r0);
  chk.phi_times_m = phi * static_cast<double>(res.total);
  chk.phi_times_mprime = phi * static_cast<double>(res.reps.size());
  const double tol = 1e-6 * std::max(1.0, chk.m1_plus_principal);
  if (std::abs(chk.m1_plus_principal - chk.phi_times_m) <= tol)
    chk.matches = "phi(q)*|M|";
  else if (std::abs(chk.m1_plus_principal - chk.phi_times_mprime) <= tol)
    chk.matches = "phi(q)*|M'|";
  else
    chk.matches = "neither";
  chk.endpoint_applicable = res.total == q / N;
  if (chk.endpoint_applicable) {
    chk.endpoint_ok = mom.m1 <= static_cast<double>(q) * static_cast<double>(q) /
                                    static_cast<double>(N) * (1.0 + 1e-12);
  }
  const double sum_r = res.sum_r();
  chk.principal_ok =
      std::norm(mom.s0) * std::norm(mom.r0) <=
      static_cast<double>(N) * static_cast<double>(N) * sum_r * sum_r *
          (1.0 + 1e-9);
  return chk;
}

}  // namespace reslab
