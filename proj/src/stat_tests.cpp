#include "censormorph/stat_tests.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "censormorph/distributions.hpp"
#include "censormorph/errors.hpp"
#include "censormorph/rng.hpp"

namespace censormorph {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct OneSided {
  double less;
  double greater;
};

// The smaller tail is evaluated directly and the other is its complement,
// so less + greater == 1 in floating point.
OneSided one_sided_from_z(double z) {
  if (z < 0.0) {
    const double less = norm_cdf(z);
    return {less, 1.0 - less};
  }
  const double greater = norm_sf(z);
  return {1.0 - greater, greater};
}

OneSided one_sided_from_t(double t, double df) {
  if (t < 0.0) {
    const double less = t_sf(-t, df);
    return {less, 1.0 - less};
  }
  const double greater = t_sf(t, df);
  return {1.0 - greater, greater};
}

double select_p(const OneSided& p, Alternative alt) {
  switch (alt) {
    case Alternative::less: return p.less;
    case Alternative::greater: return p.greater;
    default: return std::min(1.0, 2.0 * std::min(p.less, p.greater));
  }
}

void require_direction(Alternative alt) {
  if (alt == Alternative::not_applicable) throw InvalidParameter("pairwise tests need a direction");
}

}  // namespace

std::string_view to_string(TestKind t) noexcept {
  switch (t) {
    case TestKind::kruskal_wallis: return "kruskal_wallis";
    case TestKind::anova_f_hov: return "anova_f_hov";
    case TestKind::anova_f_welch: return "anova_f_welch";
    case TestKind::wilcoxon: return "wilcoxon";
    case TestKind::welch_t: return "welch_t";
    case TestKind::ks_two_sample: return "ks_two_sample";
    case TestKind::lilliefors: return "lilliefors";
  }
  return "unknown";
}

std::string_view to_string(Alternative a) noexcept {
  switch (a) {
    case Alternative::two_sided: return "two_sided";
    case Alternative::less: return "less";
    case Alternative::greater: return "greater";
    case Alternative::not_applicable: return "not_applicable";
  }
  return "unknown";
}

std::optional<TestKind> parse_test_kind(std::string_view s) noexcept {
  for (const auto t : {TestKind::kruskal_wallis, TestKind::anova_f_hov, TestKind::anova_f_welch, TestKind::wilcoxon,
                       TestKind::welch_t, TestKind::ks_two_sample, TestKind::lilliefors}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<Alternative> parse_alternative(std::string_view s) noexcept {
  for (const auto a : {Alternative::two_sided, Alternative::less, Alternative::greater, Alternative::not_applicable}) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

TestResult TestResult::invalid(TestKind test, Alternative alt, std::string reason) {
  TestResult r;
  r.test = test;
  r.statistic = kNaN;
  r.p_value = kNaN;
  r.alternative = alt;
  r.valid = false;
  r.invalid_reason = std::move(reason);
  return r;
}

Moments moments_of(std::span<const double> values) noexcept {
  Moments m;
  for (const double v : values) m.push(v);
  return m;
}

double RankedPool::tie_sum() const noexcept {
  double sum = 0.0;
  for (const auto& g : tie_groups) sum += tie_term(g.multiplicity);
  return sum;
}

RankedPool mid_rank(SampleSpans samples) {
  std::vector<double> values;
  for (const auto s : samples) values.insert(values.end(), s.begin(), s.end());
  if (values.empty()) throw EmptyInput("no observations to rank");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  RankedPool pool;
  pool.n_total = values.size();
  pool.mid_ranks.resize(values.size());
  for (std::size_t first = 0; first < order.size();) {
    std::size_t last = first + 1;
    while (last < order.size() && values[order[last]] == values[order[first]]) ++last;
    const double rank = block_mid_rank(first, last);
    for (std::size_t i = first; i < last; ++i) pool.mid_ranks[order[i]] = rank;
    pool.tie_groups.push_back({values[order[first]], last - first});
    first = last;
  }
  return pool;
}

// ---------------------------------------------------------------------------

TestResult kruskal_wallis_kernel(std::span<const RankTotal> groups, double tie_sum) {
  constexpr auto kind = TestKind::kruskal_wallis;
  constexpr auto alt = Alternative::not_applicable;
  if (groups.size() < 2) return TestResult::invalid(kind, alt, "too-few-groups");
  std::size_t n_total = 0;
  for (const auto& g : groups) {
    if (g.n == 0) return TestResult::invalid(kind, alt, "empty-group");
    n_total += g.n;
  }
  if (n_total < 3) return TestResult::invalid(kind, alt, "too-few-observations");

  const auto n = static_cast<double>(n_total);
  const double correction = 1.0 - tie_sum / (n * n * n - n);
  if (!(correction > 0.0)) return TestResult::invalid(kind, alt, "all-values-tied");

  double weighted = 0.0;
  for (const auto& g : groups) weighted += g.rank_sum * g.rank_sum / static_cast<double>(g.n);
  const double h = std::max(0.0, (12.0 / (n * (n + 1.0)) * weighted - 3.0 * (n + 1.0)) / correction);

  TestResult r;
  r.test = kind;
  r.alternative = alt;
  r.statistic = h;
  r.df1 = static_cast<double>(groups.size() - 1);
  r.p_value = chi2_sf(h, *r.df1);
  return r;
}

TestResult anova_kernel(std::span<const Moments> groups, bool hov) {
  const auto kind = hov ? TestKind::anova_f_hov : TestKind::anova_f_welch;
  constexpr auto alt = Alternative::not_applicable;
  const std::size_t g = groups.size();
  if (g < 2) return TestResult::invalid(kind, alt, "too-few-groups");
  const auto gd = static_cast<double>(g);

  TestResult r;
  r.test = kind;
  r.alternative = alt;

  if (hov) {
    std::size_t n_total = 0;
    for (const auto& m : groups) {
      if (m.n == 0) return TestResult::invalid(kind, alt, "empty-group");
      n_total += m.n;
    }
    if (n_total < g + 1) return TestResult::invalid(kind, alt, "insufficient-group-size");
    const auto n = static_cast<double>(n_total);
    double grand = 0.0;
    for (const auto& m : groups) grand += static_cast<double>(m.n) * m.mean;
    grand /= n;
    double ss_between = 0.0;
    double ss_within = 0.0;
    for (const auto& m : groups) {
      const double d = m.mean - grand;
      ss_between += static_cast<double>(m.n) * d * d;
      ss_within += m.m2;
    }
    if (!(ss_within > 0.0)) return TestResult::invalid(kind, alt, "zero-within-variance");
    r.df1 = gd - 1.0;
    r.df2 = n - gd;
    r.statistic = (ss_between / *r.df1) / (ss_within / *r.df2);
    r.p_value = f_sf(r.statistic, *r.df1, *r.df2);
    return r;
  }

  double w_total = 0.0;
  std::vector<double> weights(g);
  for (std::size_t i = 0; i < g; ++i) {
    if (groups[i].n < 2) return TestResult::invalid(kind, alt, "insufficient-group-size");
    const double var = groups[i].variance();
    if (!(var > 0.0)) return TestResult::invalid(kind, alt, "zero-within-variance");
    weights[i] = static_cast<double>(groups[i].n) / var;
    w_total += weights[i];
  }
  double weighted_mean = 0.0;
  for (std::size_t i = 0; i < g; ++i) weighted_mean += weights[i] * groups[i].mean;
  weighted_mean /= w_total;
  double between = 0.0;
  double lambda = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    const double d = groups[i].mean - weighted_mean;
    between += weights[i] * d * d;
    const double share = 1.0 - weights[i] / w_total;
    lambda += share * share / static_cast<double>(groups[i].n - 1);
  }
  if (!(lambda > 0.0)) return TestResult::invalid(kind, alt, "degenerate-weights");
  const double numerator = between / (gd - 1.0);
  const double denominator = 1.0 + 2.0 * (gd - 2.0) * lambda / (gd * gd - 1.0);
  r.statistic = numerator / denominator;
  r.df1 = gd - 1.0;
  r.df2 = (gd * gd - 1.0) / (3.0 * lambda);
  r.p_value = f_sf(r.statistic, *r.df1, *r.df2);
  return r;
}

TestResult wilcoxon_kernel(std::size_t nx, std::size_t ny, double rank_sum_x, double tie_sum, Alternative alt) {
  constexpr auto kind = TestKind::wilcoxon;
  if (nx == 0 || ny == 0) return TestResult::invalid(kind, alt, "empty-group");
  const auto x = static_cast<double>(nx);
  const auto y = static_cast<double>(ny);
  const double n = x + y;
  const double expected = x * (n + 1.0) / 2.0;
  const double tie_adjust = n > 1.0 ? tie_sum / (n * (n - 1.0)) : 0.0;
  const double variance = x * y / 12.0 * ((n + 1.0) - tie_adjust);
  if (!(variance > 0.0)) return TestResult::invalid(kind, alt, "zero-variance");

  TestResult r;
  r.test = kind;
  r.alternative = alt;
  r.statistic = rank_sum_x;
  r.p_value = select_p(one_sided_from_z((rank_sum_x - expected) / std::sqrt(variance)), alt);
  return r;
}

TestResult welch_t_kernel(const Moments& x, const Moments& y, Alternative alt) {
  constexpr auto kind = TestKind::welch_t;
  if (x.n < 2 || y.n < 2) return TestResult::invalid(kind, alt, "insufficient-group-size");
  const double a = x.variance() / static_cast<double>(x.n);
  const double b = y.variance() / static_cast<double>(y.n);
  const double se2 = a + b;
  if (!(se2 > 0.0)) return TestResult::invalid(kind, alt, "zero-variance");

  TestResult r;
  r.test = kind;
  r.alternative = alt;
  r.statistic = (x.mean - y.mean) / std::sqrt(se2);
  r.df1 = se2 * se2 / (a * a / static_cast<double>(x.n - 1) + b * b / static_cast<double>(y.n - 1));
  r.p_value = select_p(one_sided_from_t(r.statistic, *r.df1), alt);
  return r;
}

// ---------------------------------------------------------------------------

TestResult kruskal_wallis(SampleSpans samples) {
  if (samples.size() < 2) throw TooFewGroups("Kruskal-Wallis needs at least 2 groups");
  for (const auto s : samples) {
    if (s.empty()) throw EmptyGroup("Kruskal-Wallis group without observations");
  }
  const auto ranked = mid_rank(samples);
  if (ranked.n_total < 3) throw InsufficientGroupSize("Kruskal-Wallis needs at least 3 observations");
  std::vector<RankTotal> totals;
  std::size_t offset = 0;
  for (const auto s : samples) {
    RankTotal t{s.size(), 0.0};
    for (std::size_t i = 0; i < s.size(); ++i) t.rank_sum += ranked.mid_ranks[offset + i];
    offset += s.size();
    totals.push_back(t);
  }
  return kruskal_wallis_kernel(totals, ranked.tie_sum());
}

TestResult anova_f(SampleSpans samples, bool hov) {
  if (samples.size() < 2) throw TooFewGroups("ANOVA needs at least 2 groups");
  std::vector<Moments> moments;
  std::size_t n_total = 0;
  for (const auto s : samples) {
    if (s.size() < (hov ? 1u : 2u)) {
      throw InsufficientGroupSize(hov ? "ANOVA group without observations" : "Welch ANOVA needs n >= 2 per group");
    }
    n_total += s.size();
    moments.push_back(moments_of(s));
  }
  if (hov && n_total < samples.size() + 1) throw InsufficientGroupSize("ANOVA needs N - g >= 1");
  return anova_kernel(moments, hov);
}

TestResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, Alternative alt) {
  require_direction(alt);
  if (x.empty() || y.empty()) throw EmptyInput("Wilcoxon needs two non-empty samples");
  const std::array<std::span<const double>, 2> both{x, y};
  const auto ranked = mid_rank(both);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) rank_sum += ranked.mid_ranks[i];
  return wilcoxon_kernel(x.size(), y.size(), rank_sum, ranked.tie_sum(), alt);
}

TestResult welch_t(std::span<const double> x, std::span<const double> y, Alternative alt) {
  require_direction(alt);
  if (x.size() < 2 || y.size() < 2) throw InsufficientGroupSize("Welch t needs n >= 2 in both samples");
  return welch_t_kernel(moments_of(x), moments_of(y), alt);
}

TestResult ks_two_sample(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw EmptyInput("K-S needs two non-empty samples");
  std::vector<double> a(x.begin(), x.end());
  std::vector<double> b(y.begin(), y.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const auto n = static_cast<double>(a.size());
  const auto m = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  TestResult r;
  r.test = TestKind::ks_two_sample;
  r.alternative = Alternative::two_sided;
  r.statistic = d;
  r.p_value = kolmogorov_sf(d * std::sqrt(n * m / (n + m)));
  return r;
}

double lilliefors_statistic(std::span<const double> sorted) {
  const auto m = moments_of(sorted);
  const double sd = std::sqrt(m.variance());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = norm_cdf((sorted[i] - m.mean) / sd);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

TestResult lilliefors(std::span<const double> x, std::size_t n_mc, std::uint64_t seed) {
  if (x.size() < 4) throw InsufficientGroupSize("Lilliefors needs n >= 4");
  if (n_mc == 0) throw InvalidParameter("n_mc must be positive");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  if (!(moments_of(sorted).variance() > 0.0)) throw ZeroVariance("Lilliefors needs a non-constant sample");

  const double observed = lilliefors_statistic(sorted);
  Rng rng(seed);
  std::vector<double> draw(sorted.size());
  std::size_t exceed = 0;
  for (std::size_t rep = 0; rep < n_mc; ++rep) {
    for (auto& v : draw) v = rng.normal();
    std::sort(draw.begin(), draw.end());
    if (lilliefors_statistic(draw) >= observed) ++exceed;
  }
  TestResult r;
  r.test = TestKind::lilliefors;
  r.alternative = Alternative::not_applicable;
  r.statistic = observed;
  r.p_value = static_cast<double>(exceed) / static_cast<double>(n_mc);
  return r;
}

std::vector<double> holm_adjust(std::span<const double> p_values) {
  for (const double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw OutOfRange("p-values must lie in [0, 1]");
  }
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t rank = 0; rank < m; ++rank) {
    const std::size_t idx = order[rank];
    running = std::max(running, std::min(1.0, static_cast<double>(m - rank) * p_values[idx]));
    adjusted[idx] = running;
  }
  return adjusted;
}

}  // namespace censormorph
