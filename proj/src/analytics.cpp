#include "multipool/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "multipool/errors.hpp"

namespace multipool::analytics {

namespace {

constexpr std::uint32_t kDirectBinomialLimit = 30;

double log_choose(std::uint32_t m, std::uint32_t k) {
  return std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
}

double choose(std::uint32_t m, std::uint32_t k) {
  double c = 1.0;
  for (std::uint32_t i = 1; i <= k; ++i) c = c * (m - k + i) / i;
  return c;
}

// sum_{j=lo}^{hi} C(m, j) p^j (1 - p)^(m - j)
double binomial_mass(std::uint32_t m, std::uint32_t lo, std::uint32_t hi, double p) {
  double total = 0.0;
  for (std::uint32_t j = lo; j <= hi && j <= m; ++j) {
    double term;
    if (m <= kDirectBinomialLimit) {
      term = choose(m, j) * std::pow(p, j) * std::pow(1.0 - p, m - j);
    } else {
      const double a = j == 0 ? 0.0 : (p == 0.0 ? -INFINITY : j * std::log(p));
      const double b = m - j == 0 ? 0.0 : (p == 1.0 ? -INFINITY : (m - j) * std::log1p(-p));
      term = std::exp(log_choose(m, j) + a + b);
    }
    total += term;
  }
  // Rounding can push a full or nearly full sum just past 1.
  return std::min(total, 1.0);
}

// Number of negative pools among an item's m pools is Bin(m, p_neg); the item
// is flagged iff that number is <= nc.
double flagged(const Scenario& s, double p_neg) { return binomial_mass(s.m, 0, s.nc, p_neg); }
double not_flagged(const Scenario& s, double p_neg) {
  return s.nc >= s.m ? 0.0 : binomial_mass(s.m, s.nc + 1, s.m, p_neg);
}

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1]");
}

// (1 + rho/(1-rho) * sens/fpr)^-1 with boundary conventions; fpr = 1 - spec.
std::optional<double> type_one_impl(double rho, double sens, double fpr) {
  const double p_flag = rho * sens + (1.0 - rho) * fpr;
  if (!(p_flag > 0.0)) return std::nullopt;
  if (fpr == 0.0 || rho == 1.0) return 0.0;
  if (rho == 0.0 || sens == 0.0) return 1.0;
  return 1.0 / (1.0 + rho / (1.0 - rho) * (sens / fpr));
}

// (1 + (1-rho)/rho * spec/miss)^-1; miss = 1 - sens.
std::optional<double> type_two_impl(double rho, double miss, double spec) {
  const double p_clear = rho * miss + (1.0 - rho) * spec;
  if (!(p_clear > 0.0)) return std::nullopt;
  if (miss == 0.0 || rho == 0.0) return 0.0;
  if (rho == 1.0 || spec == 0.0) return 1.0;
  return 1.0 / (1.0 + (1.0 - rho) / rho * (spec / miss));
}

}  // namespace

void Scenario::validate() const {
  check_rho(rho);
  if (q < 2) throw DomainError("pool size q must be at least 2");
  if (m < 1) throw DomainError("multiplicity m must be at least 1");
  if (nc > m) throw DomainError("nc = " + std::to_string(nc) + " exceeds m = " + std::to_string(m));
  noise.validate();
}

double gamma(std::uint32_t k, const Scenario& s) {
  s.validate();
  if (k > s.q) throw DomainError("gamma_k needs 0 <= k <= q, got k = " + std::to_string(k));
  return (1.0 - s.noise.p_fp) * std::pow(1.0 - (1.0 - s.noise.p_fn) * s.rho, static_cast<double>(s.q - k));
}

double gamma1(const Scenario& s) { return gamma(1, s); }

double sensitivity(const Scenario& s) { return flagged(s, s.noise.p_fn * gamma1(s)); }
double miss_probability(const Scenario& s) { return not_flagged(s, s.noise.p_fn * gamma1(s)); }
double specificity(const Scenario& s) { return not_flagged(s, gamma1(s)); }
double false_alarm_probability(const Scenario& s) { return flagged(s, gamma1(s)); }

std::optional<double> type_one(const Scenario& s) {
  return type_one_impl(s.rho, sensitivity(s), false_alarm_probability(s));
}

std::optional<double> type_two(const Scenario& s) {
  return type_two_impl(s.rho, miss_probability(s), specificity(s));
}

std::optional<double> type_one(double rho, double sens, double spec) {
  check_rho(rho);
  return type_one_impl(rho, sens, 1.0 - spec);
}

std::optional<double> type_two(double rho, double sens, double spec) {
  check_rho(rho);
  return type_two_impl(rho, 1.0 - sens, spec);
}

ExpectedCounts expected_counts(const Scenario& s) {
  const double n = static_cast<double>(s.n);
  const double sens = sensitivity(s);
  const double fpr = false_alarm_probability(s);
  ExpectedCounts e;
  e.false_positives = n * (1.0 - s.rho) * fpr;
  e.positives = n * (s.rho * sens + (1.0 - s.rho) * fpr);
  e.false_negatives = n * s.rho * miss_probability(s);
  return e;
}

double beta(const Scenario& s) {
  s.validate();
  return 1.0 - std::pow(1.0 - s.rho, static_cast<double>(s.q - 1));
}

double pivotal_probability(const Scenario& s) {
  s.validate();
  const double clean = std::pow(1.0 - s.rho, static_cast<double>(s.q - 1));
  return clean * std::pow(1.0 - clean, static_cast<double>(s.m - 1));
}

VarianceBounds variance_bounds(const Scenario& s) {
  s.validate();
  if (!s.noiseless_comp()) {
    throw NotApplicable("variance bounds hold only for noiseless testing decoded by COMP (nc = 0, p_fp = p_fn = 0)");
  }
  const double b = beta(s);
  const double m = s.m;
  const double scale = static_cast<double>(s.n) * m * s.q * s.rho * (1.0 - s.rho);
  const double cross = m * (s.q - 1.0) * std::pow(1.0 - s.rho, s.q - 1.0) * std::pow(b, m - 1.0);
  const double bm = std::pow(b, m);
  return VarianceBounds{scale * (1.0 - bm + cross), scale * (bm + cross)};
}

TuneResult min_multiplicity(double rho, std::uint32_t q, const NoiseModel& noise, double epsilon,
                            std::optional<std::uint32_t> cap) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  Scenario s{rho, q, 1, 0, noise, 0};
  s.validate();
  const std::uint32_t limit = cap.value_or(q + 1);
  if (limit < 1) throw DomainError("multiplicity cap must be at least 1");

  const double g = gamma1(s);
  const double num = std::log((1.0 - rho) / rho * (1.0 / epsilon - 1.0));
  const double den = std::log((1.0 - noise.p_fn * g) / (1.0 - g));
  double raw;
  if (std::isinf(den) && den > 0) {
    raw = 0.0;
  } else if (!(den > 0.0)) {
    raw = num > 0.0 ? INFINITY : 0.0;
  } else {
    raw = num / den;
  }

  auto meets = [&](std::uint32_t m) {
    s.m = m;
    const auto t1 = type_one(s);
    return t1.has_value() && *t1 <= epsilon;
  };

  std::uint32_t m = 1;
  if (raw > 1.0) m = raw >= limit ? limit + 1 : static_cast<std::uint32_t>(std::ceil(raw));
  while (m <= limit && !meets(m)) ++m;
  while (m > 1 && meets(m - 1)) --m;
  if (m > limit) {
    throw Infeasible("no multiplicity m <= " + std::to_string(limit) + " meets the Type I budget; raw bound " +
                         std::to_string(raw),
                     raw);
  }
  s.m = m;
  return TuneResult{raw, m, *type_one(s), static_cast<double>(q) / m};
}

double threshold_disjunct(std::uint32_t q, std::uint32_t m) {
  if (q < 2 || m < 1) throw DomainError("threshold_disjunct needs q >= 2 and m >= 1");
  return (m - 1.0) / (static_cast<double>(q) * q);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("entropy argument must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double threshold_info(std::uint32_t q, std::uint32_t m) {
  if (q < 1 || m < 1) throw DomainError("threshold_info needs q >= 1 and m >= 1");
  if (m > q) throw NoSolution("m/q > 1: binary entropy never exceeds 1 bit");
  if (m == q) return 0.5;
  const double target = static_cast<double>(m) / q;
  double lo = 0.0;
  double hi = 0.5;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ConfusionStats confusion_stats(const Tally& t, std::size_t infected_count, std::size_t n) {
  if (t.true_positives + t.false_negatives != infected_count) {
    throw DomainError("TP + FN does not equal the infected count");
  }
  if (t.true_positives + t.false_negatives + t.false_positives + t.true_negatives != n) {
    throw DomainError("confusion counts do not sum to n");
  }
  if (t.positives != t.true_positives + t.false_positives) throw DomainError("T does not equal TP + FP");
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  return ConfusionStats{
      ratio(t.true_positives, t.true_positives + t.false_negatives),
      ratio(t.true_negatives, t.true_negatives + t.false_positives),
      ratio(t.false_positives, t.false_positives + t.true_positives),
      ratio(t.false_negatives, t.false_negatives + t.true_negatives),
  };
}

AnalyticReport analyze(const Scenario& s) {
  s.validate();
  AnalyticReport r;
  r.gamma1 = gamma1(s);
  r.sens = sensitivity(s);
  r.spec = specificity(s);
  r.type_one = type_one(s);
  r.type_two = type_two(s);
  r.expected = expected_counts(s);
  if (s.noiseless_comp()) r.variance = variance_bounds(s);
  r.beta = beta(s);
  r.rho_disj = threshold_disjunct(s.q, s.m);
  if (s.m <= s.q) r.rho_info = threshold_info(s.q, s.m);
  return r;
}

}  // namespace multipool::analytics
