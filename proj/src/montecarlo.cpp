#include "multipool/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "multipool/errors.hpp"
#include "multipool/model.hpp"

namespace multipool::mc {

namespace {

// Sums for a ratio estimator sum(A_k) / sum(B_k) over trials k.
struct RatioSums {
  std::uint64_t a = 0, b = 0, aa = 0, ab = 0, bb = 0;

  void add(std::uint64_t x, std::uint64_t y) {
    a += x;
    b += y;
    aa += x * x;
    ab += x * y;
    bb += y * y;
  }
  void merge(const RatioSums& o) {
    a += o.a;
    b += o.b;
    aa += o.aa;
    ab += o.ab;
    bb += o.bb;
  }
};

struct Accumulator {
  std::vector<std::uint64_t> hist_t, hist_fp, hist_fn;
  RatioSums sens, spec, type_one, type_two;

  explicit Accumulator(std::size_t n) : hist_t(n + 1), hist_fp(n + 1), hist_fn(n + 1) {}

  void add(const Tally& t, std::size_t n) {
    ++hist_t[t.positives];
    ++hist_fp[t.false_positives];
    ++hist_fn[t.false_negatives];
    const std::uint64_t infected = t.infected();
    sens.add(t.true_positives, infected);
    spec.add(t.true_negatives, n - infected);
    type_one.add(t.false_positives, t.positives);
    type_two.add(t.false_negatives, n - t.positives);
  }

  void merge(const Accumulator& o) {
    for (std::size_t i = 0; i < hist_t.size(); ++i) {
      hist_t[i] += o.hist_t[i];
      hist_fp[i] += o.hist_fp[i];
      hist_fn[i] += o.hist_fn[i];
    }
    sens.merge(o.sens);
    spec.merge(o.spec);
    type_one.merge(o.type_one);
    type_two.merge(o.type_two);
  }
};

Estimate ratio_estimate(const RatioSums& s, std::uint64_t trials) {
  Estimate e;
  e.events = s.b;
  if (s.b == 0) return e;
  e.available = true;
  const long double r = static_cast<long double>(s.a) / s.b;
  e.value = static_cast<double>(r);
  e.se_binomial = static_cast<double>(std::sqrt(std::max(0.0L, r * (1 - r)) / s.b));
  if (trials > 1) {
    // Cluster-robust (per-trial) linearised variance of the ratio.
    const long double resid = s.aa - 2 * r * s.ab + r * r * s.bb;
    const long double b = s.b;
    const long double k = trials;
    e.se_clustered = static_cast<double>(std::sqrt(std::max(0.0L, resid) * k / (k - 1)) / b);
  }
  e.se = std::max(e.se_binomial, e.se_clustered);
  return e;
}

struct Moments {
  long double mean = 0, var = 0, m4 = 0;
};

Moments histogram_moments(const std::vector<std::uint64_t>& hist, std::uint64_t trials) {
  Moments mo;
  long double sum = 0;
  for (std::size_t v = 0; v < hist.size(); ++v) sum += static_cast<long double>(v) * hist[v];
  mo.mean = sum / trials;
  long double s2 = 0, s4 = 0;
  for (std::size_t v = 0; v < hist.size(); ++v) {
    if (hist[v] == 0) continue;
    const long double d = static_cast<long double>(v) - mo.mean;
    s2 += d * d * hist[v];
    s4 += d * d * d * d * hist[v];
  }
  mo.var = trials > 1 ? s2 / (trials - 1) : 0;
  mo.m4 = s4 / trials;
  return mo;
}

Estimate mean_estimate(const std::vector<std::uint64_t>& hist, std::uint64_t trials) {
  const Moments mo = histogram_moments(hist, trials);
  Estimate e;
  e.available = true;
  e.events = trials;
  e.value = static_cast<double>(mo.mean);
  e.se = static_cast<double>(std::sqrt(mo.var / trials));
  return e;
}

Estimate variance_estimate(const std::vector<std::uint64_t>& hist, std::uint64_t trials) {
  Estimate e;
  e.events = trials;
  if (trials < 4) return e;
  const Moments mo = histogram_moments(hist, trials);
  e.available = true;
  e.value = static_cast<double>(mo.var);
  const long double k = trials;
  const long double v = mo.m4 - (k - 3) / (k - 1) * mo.var * mo.var;
  e.se = static_cast<double>(std::sqrt(std::max(0.0L, v) / k));
  return e;
}

std::uint64_t histogram_total(const std::vector<std::uint64_t>& hist) {
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < hist.size(); ++v) total += v * hist[v];
  return total;
}

// Binomial standard error of a proportion under the analytic value, so rare
// events that were never observed still get a finite z.
double null_se(double p0, double observations) {
  if (!(observations > 0.0)) return 0.0;
  const double p = std::clamp(p0, 0.0, 1.0);
  return std::sqrt(p * (1.0 - p) / observations);
}

ComparisonRow z_row(std::string name, std::optional<double> analytic, const Estimate& emp, double threshold,
                    double scale = 1.0, double observations = -1.0) {
  ComparisonRow row;
  row.statistic = std::move(name);
  row.analytic = analytic;
  row.empirical = emp;
  if (!analytic || !emp.available) {
    row.status = RowStatus::Unavailable;
    return row;
  }
  if (observations < 0.0) observations = static_cast<double>(emp.events);
  row.se_null = scale * null_se(*analytic / scale, observations);
  const double se = std::max(emp.se, *row.se_null);
  const double diff = emp.value - *analytic;
  if (se > 0.0) {
    row.z = diff / se;
  } else {
    row.z = std::abs(diff) <= 1e-12 ? 0.0 : std::copysign(INFINITY, diff);
  }
  row.pass = std::abs(*row.z) <= threshold;
  return row;
}

ComparisonRow bound_row(std::string name, const std::optional<double>& bound, const Estimate& emp, double slack) {
  ComparisonRow row;
  row.statistic = std::move(name);
  row.empirical = emp;
  if (!bound) {
    row.status = RowStatus::NotApplicable;
    return row;
  }
  row.bound = bound;
  if (!emp.available) {
    row.status = RowStatus::Unavailable;
    return row;
  }
  row.bound_respected = emp.value <= *bound + slack * emp.se;
  row.pass = *row.bound_respected;
  return row;
}

nlohmann::ordered_json number_or_null(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

nlohmann::ordered_json estimate_json(const Estimate& e) {
  nlohmann::ordered_json j;
  j["available"] = e.available;
  j["value"] = e.available ? nlohmann::ordered_json(e.value) : nlohmann::ordered_json(nullptr);
  j["se"] = e.se;
  j["se_binomial"] = e.se_binomial;
  j["se_clustered"] = e.se_clustered;
  j["events"] = e.events;
  return j;
}

}  // namespace

void ExperimentConfig::validate() const {
  scenario.validate();
  if (trials == 0) throw DomainError("trials must be at least 1");
  if (threads == 0) throw DomainError("threads must be at least 1");
  if (design.uniform_pool_size() != scenario.q) {
    throw DomainError("design pool size does not match q = " + std::to_string(scenario.q));
  }
  if (design.uniform_multiplicity() != scenario.m) {
    throw DomainError("design multiplicity does not match m = " + std::to_string(scenario.m));
  }
  if (design.n() != scenario.n) {
    throw DomainError("design has " + std::to_string(design.n()) + " items but the scenario has n = " +
                      std::to_string(scenario.n));
  }
}

ExperimentConfig make_experiment(analytics::Scenario scenario, std::uint64_t trials, std::uint64_t master_seed) {
  ExperimentConfig config;
  config.design = build_multipool(MultipoolParams{scenario.q, scenario.m});
  scenario.n = config.design.n();
  config.scenario = scenario;
  config.trials = trials;
  config.master_seed = master_seed;
  return config;
}

Tally run_trial(const PoolingMatrix& design, const analytics::Scenario& scenario, const SeedSpec& seed) {
  const InfectionState state = sample_infections(design.n(), scenario.rho, seed);
  const auto loads = pool_loads(design, state);
  const PoolResults results = sample_pool_results(loads, scenario.noise, seed);
  const DecodedResults decoded = decode_ncomp(design, results, scenario.nc);
  return tally(state, decoded);
}

EmpiricalStats run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::size_t n = config.design.n();
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(config.threads, config.trials));

  std::vector<Accumulator> partial(workers, Accumulator(n));
  auto work = [&](unsigned w) {
    const std::uint64_t begin = config.trials * w / workers;
    const std::uint64_t end = config.trials * (w + 1) / workers;
    for (std::uint64_t k = begin; k < end; ++k) {
      partial[w].add(run_trial(config.design, config.scenario, SeedSpec{config.master_seed, k}), n);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  Accumulator acc(n);
  for (const auto& p : partial) acc.merge(p);

  EmpiricalStats s;
  s.trials = config.trials;
  s.sens = ratio_estimate(acc.sens, config.trials);
  s.spec = ratio_estimate(acc.spec, config.trials);
  s.type_one = ratio_estimate(acc.type_one, config.trials);
  s.type_two = ratio_estimate(acc.type_two, config.trials);
  s.mean_T = mean_estimate(acc.hist_t, config.trials);
  s.mean_Tfp = mean_estimate(acc.hist_fp, config.trials);
  s.mean_Tfn = mean_estimate(acc.hist_fn, config.trials);
  s.var_T = variance_estimate(acc.hist_t, config.trials);
  s.var_Tfp = variance_estimate(acc.hist_fp, config.trials);
  s.total_positives = histogram_total(acc.hist_t);
  s.total_false_positives = histogram_total(acc.hist_fp);
  s.total_false_negatives = histogram_total(acc.hist_fn);
  s.total_true_positives = acc.sens.a;
  for (std::size_t v = 0; v < acc.hist_fn.size(); ++v) {
    if (acc.hist_fn[v] != 0) s.max_false_negatives = v;
  }
  return s;
}

const char* to_string(RowStatus status) noexcept {
  switch (status) {
    case RowStatus::Ok:
      return "ok";
    case RowStatus::Unavailable:
      return "unavailable";
    case RowStatus::NotApplicable:
      return "not_applicable";
  }
  return "unknown";
}

const ComparisonRow& ComparisonReport::row(const std::string& statistic) const {
  for (const auto& r : rows) {
    if (r.statistic == statistic) return r;
  }
  throw DomainError("no comparison row named " + statistic);
}

ComparisonReport compare(const ExperimentConfig& config) {
  config.validate();
  const auto& s = config.scenario;
  const analytics::AnalyticReport a = analytics::analyze(s);
  const EmpiricalStats emp = run_experiment(config);

  ComparisonReport report;
  report.scenario = s;
  report.trials = config.trials;
  report.master_seed = config.master_seed;
  report.n = config.design.n();
  report.t = config.design.t();
  report.z_threshold = config.z_threshold;
  report.variance_slack = config.variance_slack;
  report.empirical = emp;

  const double z = config.z_threshold;
  report.rows.push_back(z_row("sens", a.sens, emp.sens, z));
  report.rows.push_back(z_row("spec", a.spec, emp.spec, z));
  report.rows.push_back(z_row("typeI", a.type_one, emp.type_one, z));
  report.rows.push_back(z_row("typeII", a.type_two, emp.type_two, z));
  // Counts are sums over n items; their null SE treats the n * trials item
  // observations as one binomial sample.
  const double n = static_cast<double>(config.design.n());
  const double item_obs = n * static_cast<double>(config.trials);
  report.rows.push_back(z_row("e_T", a.expected.positives, emp.mean_T, z, n, item_obs));
  report.rows.push_back(z_row("e_Tfp", a.expected.false_positives, emp.mean_Tfp, z, n, item_obs));
  report.rows.push_back(z_row("e_Tfn", a.expected.false_negatives, emp.mean_Tfn, z, n, item_obs));
  std::optional<double> bound_t, bound_fp;
  if (a.variance) {
    bound_t = a.variance->positives;
    bound_fp = a.variance->false_positives;
  }
  report.rows.push_back(bound_row("var_T", bound_t, emp.var_T, config.variance_slack));
  report.rows.push_back(bound_row("var_Tfp", bound_fp, emp.var_Tfp, config.variance_slack));

  report.all_pass = std::all_of(report.rows.begin(), report.rows.end(), [](const auto& r) { return r.pass; });
  return report;
}

std::string to_json(const ComparisonReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["report"] = "multipool-comparison";
  j["format_version"] = 1;
  const auto& s = report.scenario;
  j["scenario"] = ordered_json{{"q", s.q},       {"m", s.m},           {"nc", s.nc}, {"rho", s.rho},
                               {"pfp", s.noise.p_fp}, {"pfn", s.noise.p_fn}, {"n", s.n}};
  j["design"] = ordered_json{{"n", report.n}, {"t", report.t}};
  j["trials"] = report.trials;
  j["seed"] = report.master_seed;
  j["z_threshold"] = report.z_threshold;
  j["variance_slack"] = report.variance_slack;

  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    ordered_json row;
    row["statistic"] = r.statistic;
    row["status"] = to_string(r.status);
    row["analytic"] = number_or_null(r.analytic);
    row["empirical"] = estimate_json(r.empirical);
    if (r.bound || r.status == RowStatus::NotApplicable) {
      row["bound"] = number_or_null(r.bound);
      row["bound_respected"] = r.bound_respected ? ordered_json(*r.bound_respected) : ordered_json(nullptr);
    } else {
      row["se_null"] = number_or_null(r.se_null);
      row["z"] = number_or_null(r.z);
    }
    row["pass"] = r.pass;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);

  const auto& e = report.empirical;
  j["totals"] = ordered_json{{"T", e.total_positives},
                             {"T_fp", e.total_false_positives},
                             {"T_fn", e.total_false_negatives},
                             {"true_positives", e.total_true_positives},
                             {"max_T_fn", e.max_false_negatives}};
  j["all_pass"] = report.all_pass;
  return j.dump(2) + "\n";
}

}  // namespace multipool::mc
