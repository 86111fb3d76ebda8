// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "multipool/analytics.hpp"
#include "multipool/design.hpp"
#include "multipool/errors.hpp"
#include "multipool/gf.hpp"
#include "multipool/matrix_io.hpp"
#include "multipool/montecarlo.hpp"
#include "oracles.hpp"
#include "run_command.hpp"

using namespace multipool;

namespace {

// Tolerances and budgets.
constexpr double kConstructionSeconds = 10.0;
constexpr double kExactTolerance = 1e-12;
constexpr double kOracleTolerance = 1e-10;
constexpr double kOracleSeconds = 30.0;
constexpr std::uint64_t kMonteCarloTrials = 100000;
constexpr double kHardSigma = 4.0;
constexpr double kSoftSigma = 3.0;
constexpr double kSoftFraction = 0.01;
constexpr double kMonteCarloSeconds = 600.0;
constexpr double kVarianceSlack = 5.0;
constexpr double kEntropyTolerance = 1e-10;
constexpr int kTunerTuples = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

analytics::Scenario scenario(double rho, std::uint32_t q, std::uint32_t m, std::uint32_t nc, double pfp, double pfn) {
  analytics::Scenario s;
  s.rho = rho;
  s.q = q;
  s.m = m;
  s.nc = nc;
  s.noise = {pfp, pfn};
  s.n = std::size_t{q} * q;
  return s;
}

Outcome construction() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  int designs = 0;
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u, 25u, 27u, 32u}) {
    for (std::uint32_t m = 1; m <= q + 1; ++m) {
      const auto r = validate_multipool(build_multipool({q, m}), q, m);
      ++designs;
      if (!r.is_multipool || r.max_pairwise_overlap > 1) {
        o.pass = false;
        o.detail += " invalid(q=" + std::to_string(q) + ",m=" + std::to_string(m) + ")";
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= kConstructionSeconds) o.pass = false;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d designs valid in %.2f s", designs, elapsed);
  o.detail = buf + o.detail;
  return o;
}

Outcome design_bound() {
  Outcome o;
  for (std::uint32_t q : {2u, 3u, 7u, 8u}) {
    try {
      build_multipool({q, q + 2});
      o.pass = false;
      o.detail += " q=" + std::to_string(q) + " built m=q+2;";
    } catch (const DesignBound&) {
    }
  }
  const auto bound = max_pools_bound(7, 49);
  if (bound != 56) o.pass = false;
  o.detail += " m=q+2 rejected for q in {2,3,7,8}; max_pools_bound(7,49)=" + std::to_string(bound);
  return o;
}

Outcome table_reproduction() {
  Outcome o;
  const auto c = analytics::confusion_stats(Tally{39, 20, 1, 19, 960}, 20, 1000);
  const double expected[4] = {0.95, 960.0 / 980.0, 20.0 / 39.0, 1.0 / 961.0};
  const std::optional<double> got[4] = {c.sensitivity, c.specificity, c.type_one, c.type_two};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (!got[i]) {
      o.pass = false;
      continue;
    }
    worst = std::max(worst, std::abs(*got[i] - expected[i]));
  }
  if (worst > kExactTolerance) o.pass = false;
  char buf[128];
  std::snprintf(buf, sizeof buf, "max error %.3g (tolerance %.0e)", worst, kExactTolerance);
  o.detail = buf;
  return o;
}

Outcome exhaustive_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  double worst = 0.0;
  int cases = 0;
  for (auto [q, m] : {std::pair{2u, 2u}, {3u, 2u}, {3u, 3u}, {3u, 4u}}) {
    const auto a = build_multipool({q, m});
    for (double rho : {0.1, 0.3, 0.5}) {
      const auto exact = oracle::enumerate_noiseless_comp(a, rho);
      auto s = scenario(rho, q, m, 0, 0, 0);
      s.n = a.n();
      const auto e = analytics::expected_counts(s);
      for (double d : {analytics::sensitivity(s) - exact.sens, analytics::specificity(s) - exact.spec,
                       e.positives - exact.e_t, e.false_positives - exact.e_tfp}) {
        worst = std::max(worst, std::abs(d));
      }
      const auto v = analytics::variance_bounds(s);
      if (exact.var_t > v.positives || exact.var_tfp > v.false_positives) {
        o.pass = false;
        o.detail += " variance bound violated;";
      }
      ++cases;
    }
  }
  const double elapsed = seconds_since(start);
  if (worst > kOracleTolerance || elapsed >= kOracleSeconds) o.pass = false;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d cases, max error %.3g, variance bounds hold, %.2f s", cases, worst, elapsed);
  o.detail = buf + o.detail;
  return o;
}

Outcome monte_carlo_noisy() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  int cells = 0, skipped = 0, comparisons = 0, hard = 0, soft = 0, soft_cells = 0;
  double worst = 0.0;
  std::uint64_t seed = 1000;
  for (std::uint32_t q : {4u, 8u, 16u}) {
    for (std::uint32_t m : {2u, 4u, 6u}) {
      for (std::uint32_t nc : {0u, 1u}) {
        for (double rho : {0.01, 0.05, 0.1}) {
          if (m > q + 1) {
            // No (q^2, q, m)-multipool exists; nothing to simulate.
            ++skipped;
            continue;
          }
          auto config = mc::make_experiment(scenario(rho, q, m, nc, 0.02, 0.02), kMonteCarloTrials, seed++);
          config.z_threshold = kHardSigma;
          const auto report = mc::compare(config);
          ++cells;
          bool cell_soft = false;
          for (const char* stat : {"sens", "spec", "typeI", "typeII", "e_T", "e_Tfp", "e_Tfn"}) {
            const auto& row = report.row(stat);
            if (row.status != mc::RowStatus::Ok) continue;
            ++comparisons;
            const double z = std::abs(*row.z);
            worst = std::max(worst, z);
            if (z > kHardSigma) {
              ++hard;
              o.detail += " " + std::string(stat) + "(q=" + std::to_string(q) + ",m=" + std::to_string(m) +
                          ",nc=" + std::to_string(nc) + ",rho=" + std::to_string(rho) + ")";
            }
            if (z > kSoftSigma) {
              ++soft;
              cell_soft = true;
            }
          }
          soft_cells += cell_soft;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  const double soft_fraction = comparisons ? static_cast<double>(soft) / comparisons : 1.0;
  if (hard > 0 || soft_fraction >= kSoftFraction || elapsed >= kMonteCarloSeconds) o.pass = false;
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "%d cells (%d skipped, m > q+1), %d comparisons, max |z| %.2f, %d beyond 4 sigma, %.2f%% of "
                "comparisons beyond 3 sigma (in %d cells), %.1f s",
                cells, skipped, comparisons, worst, hard, 100.0 * soft_fraction, soft_cells, elapsed);
  o.detail = buf + o.detail;
  return o;
}

Outcome variance_bounds_hold() {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  int cells = 0;
  double closest = INFINITY;
  std::uint64_t seed = 2000;
  for (std::uint32_t m : {2u, 4u, 6u, 8u, 10u}) {
    for (int k = 1; k <= 10; ++k) {
      const double rho = 0.01 * k;
      auto config = mc::make_experiment(scenario(rho, 16, m, 0, 0, 0), kMonteCarloTrials, seed++);
      config.variance_slack = kVarianceSlack;
      const auto report = mc::compare(config);
      ++cells;
      for (const char* stat : {"var_T", "var_Tfp"}) {
        const auto& row = report.row(stat);
        if (row.status != mc::RowStatus::Ok || !row.bound_respected || !*row.bound_respected) {
          o.pass = false;
          o.detail += " " + std::string(stat) + "(m=" + std::to_string(m) + ",rho=" + std::to_string(rho) + ")";
          continue;
        }
        closest = std::min(closest, *row.bound / row.empirical.value);
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d cells, smallest bound/empirical ratio %.3f, %.1f s", cells, closest,
                seconds_since(start));
  o.detail = buf + o.detail;
  return o;
}

Outcome monotonicity() {
  Outcome o;
  int checks = 0;
  for (int k = 1; k <= 50; ++k) {
    const double rho = 0.2 * k / 50.0;
    for (std::uint32_t nc : {0u, 1u}) {
      for (std::uint32_t m = 2; m < 10; ++m) {
        const auto a = scenario(rho, 16, m, nc, 0.02, 0.02);
        const auto b = scenario(rho, 16, m + 1, nc, 0.02, 0.02);
        checks += 2;
        if (analytics::sensitivity(b) > analytics::sensitivity(a) ||
            analytics::specificity(b) < analytics::specificity(a)) {
          o.pass = false;
        }
      }
    }
    for (std::uint32_t m = 2; m <= 10; ++m) {
      ++checks;
      if (analytics::sensitivity(scenario(rho, 16, m, 1, 0.02, 0.02)) <
          analytics::sensitivity(scenario(rho, 16, m, 0, 0.02, 0.02))) {
        o.pass = false;
      }
    }
  }
  o.detail = std::to_string(checks) + " pointwise inequalities checked";
  return o;
}

Outcome thresholds() {
  Outcome o;
  if (analytics::threshold_disjunct(16, 3) != 2.0 / 256.0) {
    o.pass = false;
    o.detail += " disjunct(16,3) != 2/256;";
  }
  double worst = 0.0, prev = 0.0;
  for (std::uint32_t m = 1; m <= 16; ++m) {
    const double x = analytics::threshold_info(16, m);
    worst = std::max(worst, std::abs(analytics::binary_entropy(x) - m / 16.0));
    if (!(x > prev)) o.pass = false;
    prev = x;
  }
  if (worst > kEntropyTolerance) o.pass = false;
  for (std::uint32_t m : {3u, 4u, 6u}) {
    if (!(analytics::threshold_disjunct(16, m) < analytics::threshold_info(16, m))) {
      o.pass = false;
      o.detail += " disjunct >= info at m=" + std::to_string(m) + ";";
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "disjunct(16,3)=2/256, max |H(x)-m/q| %.2g, info increasing in m, disjunct < info",
                worst);
  o.detail = buf + o.detail;
  return o;
}

Outcome tuner() {
  Outcome o;
  std::mt19937_64 gen(20240601);
  const auto orders = gf::supported_orders();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int solved = 0, infeasible = 0;
  for (int k = 0; k < kTunerTuples; ++k) {
    const double rho = std::pow(10.0, -4.0 + 3.5 * unit(gen));
    const std::uint32_t q = orders[gen() % orders.size()];
    const double eps = std::pow(10.0, -6.0 + 6.0 * unit(gen)) * 0.99;
    const NoiseModel noise{0.05 * unit(gen), 0.05 * unit(gen)};
    auto type_one_at = [&](std::uint32_t m) {
      auto s = scenario(rho, q, m, 0, noise.p_fp, noise.p_fn);
      return analytics::type_one(s).value_or(0.0);
    };
    try {
      const auto r = analytics::min_multiplicity(rho, q, noise, eps);
      ++solved;
      if (!(type_one_at(r.m) <= eps) || !(r.m == 1 || type_one_at(r.m - 1) > eps)) {
        o.pass = false;
        o.detail += " tuple " + std::to_string(k) + " inconsistent;";
      }
    } catch (const Infeasible&) {
      ++infeasible;
      // Infeasible must mean that even m = q + 1 misses the budget.
      if (!(type_one_at(q + 1) > eps)) {
        o.pass = false;
        o.detail += " tuple " + std::to_string(k) + " wrongly infeasible;";
      }
    }
  }
  o.detail = std::to_string(solved) + " solved and " + std::to_string(infeasible) +
             " infeasible tuples agree with the closed form" + o.detail;
  return o;
}

Outcome determinism() {
  Outcome o;
  const std::filesystem::path dir(MULTIPOOL_TEST_TMP);
  std::filesystem::create_directories(dir);
  const std::string base = "simulate --q 16 --m 6 --nc 1 --rho 0.05 --pfp 0.02 --pfn 0.02 --trials 20000 --seed 77";
  std::vector<std::string> reports;
  for (auto [tag, threads] : {std::pair{"a", 1}, {"b", 1}, {"c", 4}, {"d", 4}}) {
    const auto path = (dir / (std::string("det_") + tag + ".json")).string();
    const auto r = testing_support::run_cli(base + " --threads " + std::to_string(threads) + " -o " + path);
    if (r.exit_code != 0) {
      o.pass = false;
      o.detail += " run exited " + std::to_string(r.exit_code) + ";";
    }
    reports.push_back(io::read_file(path));
  }
  for (const auto& r : reports) {
    if (r != reports.front() || r.empty()) o.pass = false;
  }
  o.detail = "4 reports (threads 1,1,4,4) of " + std::to_string(reports.front().size()) + " bytes " +
             (o.pass ? "identical" : "differ") + o.detail;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"construction correctness", construction},
      {"multiplicity bound", design_bound},
      {"confusion table", table_reproduction},
      {"closed forms vs exhaustive enumeration", exhaustive_oracle},
      {"closed forms vs Monte Carlo (noisy)", monte_carlo_noisy},
      {"variance bounds hold", variance_bounds_hold},
      {"monotonicity", monotonicity},
      {"thresholds", thresholds},
      {"tuner consistency", tuner},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s criterion %zu: %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
