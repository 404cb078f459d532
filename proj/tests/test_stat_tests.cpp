#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "censormorph/distributions.hpp"
#include "censormorph/errors.hpp"
#include "censormorph/rng.hpp"
#include "censormorph/stat_tests.hpp"
#include "doctest.h"

using namespace censormorph;
using Samples = std::vector<std::vector<double>>;

namespace {

std::vector<double> normal_sample(Rng& rng, std::size_t n, double shift = 0.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal() + shift;
  return v;
}

// Largest gap between the empirical cdf of `p` and Uniform(0, 1).
double uniform_ks_distance(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  double d = 0.0;
  const auto n = static_cast<double>(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    d = std::max({d, (i + 1) / n - p[i], p[i] - i / n});
  }
  return d;
}

}  // namespace

TEST_CASE("mid_rank") {
  SUBCASE("no ties") {
    const auto r = mid_rank(Samples{{1, 2, 3}, {4, 5, 6}});
    CHECK(r.mid_ranks == std::vector<double>{1, 2, 3, 4, 5, 6});
    CHECK(r.tie_sum() == 0.0);
  }
  SUBCASE("ties get the average rank") {
    const auto r = mid_rank(Samples{{1, 2, 2}, {2, 3}});
    CHECK(r.mid_ranks == std::vector<double>{1, 3, 3, 3, 5});
    CHECK(r.tie_sum() == 24.0);
  }
  SUBCASE("all equal") {
    const auto r = mid_rank(Samples{{7, 7, 7, 7, 7}});
    CHECK(r.mid_ranks == std::vector<double>(5, 3.0));
    REQUIRE(r.tie_groups.size() == 1);
    CHECK(r.tie_groups[0].multiplicity == 5);
  }
  SUBCASE("rank sum is n(n+1)/2") {
    Rng rng(3);
    for (int rep = 0; rep < 50; ++rep) {
      Samples s(3);
      for (auto& g : s) {
        for (int i = 0; i < 20; ++i) g.push_back(std::floor(rng.uniform() * 10));
      }
      const auto r = mid_rank(s);
      const double total = std::accumulate(r.mid_ranks.begin(), r.mid_ranks.end(), 0.0);
      CHECK(total == 60.0 * 61.0 / 2.0);
      std::size_t tied = 0;
      for (const auto& g : r.tie_groups) tied += g.multiplicity;
      CHECK(tied == 60);
    }
  }
  CHECK_THROWS_AS(mid_rank(Samples{{}, {}}), EmptyInput);
}

TEST_CASE("kruskal_wallis") {
  SUBCASE("hand-evaluated H, chi-square(2) tail is exp(-H/2)") {
    const auto r = kruskal_wallis(Samples{{1, 2}, {3, 4}, {5, 6}});
    REQUIRE(r.valid);
    CHECK(r.statistic == doctest::Approx(32.0 / 7.0).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(std::exp(-16.0 / 7.0)).epsilon(1e-12));
    CHECK(*r.df1 == 2.0);
    CHECK(r.alternative == Alternative::not_applicable);
  }
  SUBCASE("identical groups give H = 0, p = 1") {
    const auto r = kruskal_wallis(Samples{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
    CHECK(r.valid);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_value == 1.0);
  }
  SUBCASE("tie-corrected statistic matches scipy.stats.kruskal") {
    const auto r = kruskal_wallis(Samples{{1, 2, 2, 5}, {2, 3, 7}, {1, 1, 9, 10}});
    CHECK(r.statistic == doctest::Approx(0.6839622641509481).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(0.7103616076319332).epsilon(1e-10));
  }
  SUBCASE("all values tied") {
    const auto r = kruskal_wallis(Samples{{1, 1, 1}, {1, 1}, {1}});
    CHECK_FALSE(r.valid);
    CHECK(r.invalid_reason == "all-values-tied");
    CHECK(std::isnan(r.p_value));
  }
  CHECK_THROWS_AS(kruskal_wallis(Samples{{1, 2, 3}}), TooFewGroups);
  CHECK_THROWS_AS(kruskal_wallis(Samples{{1, 2}, {}}), EmptyGroup);
}

TEST_CASE("anova_f") {
  SUBCASE("zero between-group variance") {
    const auto r = anova_f(Samples{{1, 2, 3}, {1, 2, 3}, {1, 2, 3}}, true);
    CHECK(r.statistic == 0.0);
    CHECK(r.p_value == 1.0);
  }
  SUBCASE("hand ANOVA table") {
    const auto r = anova_f(Samples{{1, 2, 3}, {2, 3, 4}}, true);
    CHECK(r.statistic == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(*r.df1 == 1.0);
    CHECK(*r.df2 == 4.0);
    // F(1, 4) tail through the t^2 relation
    CHECK(r.p_value == doctest::Approx(2.0 * t_sf(std::sqrt(1.5), 4.0)).epsilon(1e-12));
    CHECK(r.p_value == doctest::Approx(0.2878641347266907).epsilon(1e-10));
  }
  SUBCASE("Welch ANOVA on two groups is the squared Welch t") {
    const auto w = anova_f(Samples{{1, 2, 3}, {2, 3, 4}}, false);
    const auto t = welch_t(std::vector<double>{1, 2, 3}, std::vector<double>{2, 3, 4}, Alternative::two_sided);
    CHECK(w.statistic == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(w.statistic == doctest::Approx(t.statistic * t.statistic).epsilon(1e-14));
    CHECK(*w.df2 == doctest::Approx(*t.df1).epsilon(1e-14));
    CHECK(w.p_value == doctest::Approx(t.p_value).epsilon(1e-10));
  }
  SUBCASE("classical and Welch F match scipy / statsmodels") {
    const Samples s{{1.5, 2, 3.2, 5}, {2, 3, 7.1}, {1, 1.2, 9, 10}};
    const auto hov = anova_f(s, true);
    CHECK(hov.statistic == doctest::Approx(0.4860427304104745).epsilon(1e-12));
    CHECK(hov.p_value == doctest::Approx(0.6321008019134925).epsilon(1e-10));
    const auto welch = anova_f(s, false);
    CHECK(welch.statistic == doctest::Approx(0.48629207134477537).epsilon(1e-12));
    CHECK(*welch.df2 == doctest::Approx(4.165971410105511).epsilon(1e-12));
    CHECK(welch.p_value == doctest::Approx(0.6459343864762063).epsilon(1e-10));
  }
  SUBCASE("zero within-group variance is invalid, not an exception") {
    CHECK_FALSE(anova_f(Samples{{1, 1}, {2, 2}}, true).valid);
    const auto w = anova_f(Samples{{1, 1, 1}, {1, 2, 3}}, false);
    CHECK_FALSE(w.valid);
    CHECK(w.invalid_reason == "zero-within-variance");
  }
  CHECK_THROWS_AS(anova_f(Samples{{1, 2}}, true), TooFewGroups);
  CHECK_THROWS_AS(anova_f(Samples{{1}, {2, 3}}, false), InsufficientGroupSize);
  CHECK_THROWS_AS(anova_f(Samples{{1}, {2}}, true), InsufficientGroupSize);
}

TEST_CASE("wilcoxon_rank_sum") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, 5, 6};
  SUBCASE("hand normal approximation") {
    const auto r = wilcoxon_rank_sum(a, b, Alternative::less);
    CHECK(r.statistic == 6.0);
    CHECK(r.p_value == doctest::Approx(norm_cdf(-4.5 / std::sqrt(5.25))).epsilon(1e-14));
    CHECK(r.p_value == doctest::Approx(0.024767306717813353).epsilon(1e-10));
  }
  SUBCASE("exchangeable samples") {
    CHECK(wilcoxon_rank_sum(a, a, Alternative::less).p_value == 0.5);
    CHECK(wilcoxon_rank_sum(a, a, Alternative::two_sided).p_value == 1.0);
  }
  SUBCASE("ties match scipy mannwhitneyu without continuity correction") {
    const auto r = wilcoxon_rank_sum(std::vector<double>{1, 2, 2, 5}, std::vector<double>{2, 3, 7}, Alternative::less);
    CHECK(r.statistic == 13.0);  // U = 3
    CHECK(r.p_value == doctest::Approx(0.13551382371468834).epsilon(1e-10));
  }
  SUBCASE("all tied") {
    const auto r = wilcoxon_rank_sum(std::vector<double>{2, 2}, std::vector<double>{2, 2, 2}, Alternative::less);
    CHECK_FALSE(r.valid);
    CHECK(r.invalid_reason == "zero-variance");
  }
  CHECK_THROWS_AS(wilcoxon_rank_sum(std::vector<double>{}, b, Alternative::less), EmptyInput);
}

TEST_CASE("welch_t") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{2, 3, 4};
  CHECK(welch_t(a, a, Alternative::two_sided).statistic == 0.0);
  CHECK(welch_t(a, a, Alternative::two_sided).p_value == 1.0);

  const auto r = welch_t(a, b, Alternative::less);
  CHECK(r.statistic == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-14));
  CHECK(*r.df1 == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(r.p_value == doctest::Approx(0.5 * regularized_beta(4.0 / 5.5, 2.0, 0.5)).epsilon(1e-12));
  CHECK(r.p_value == doctest::Approx(0.1439320673633454).epsilon(1e-10));

  SUBCASE("df collapses toward 1 when one variance dominates") {
    const auto d = welch_t(std::vector<double>{0, 1000}, std::vector<double>{5, 5.0001}, Alternative::less);
    CHECK(*d.df1 == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("scipy ttest_ind(equal_var=False)") {
    const auto s = welch_t(std::vector<double>{1.5, 2, 3.2, 5}, std::vector<double>{2, 3, 7.1}, Alternative::less);
    CHECK(s.statistic == doctest::Approx(-0.6356655022073202).epsilon(1e-12));
    CHECK(*s.df1 == doctest::Approx(2.9952879769974845).epsilon(1e-12));
    CHECK(s.p_value == doctest::Approx(0.28511692490186563).epsilon(1e-10));
  }
  SUBCASE("both variances zero") {
    CHECK_FALSE(welch_t(std::vector<double>{1, 1}, std::vector<double>{2, 2}, Alternative::less).valid);
    CHECK(welch_t(std::vector<double>{1, 1}, std::vector<double>{2, 3}, Alternative::less).valid);
  }
  CHECK_THROWS_AS(welch_t(std::vector<double>{1}, b, Alternative::less), InsufficientGroupSize);
}

TEST_CASE("one-sided complementarity") {
  Rng rng(11);
  for (int rep = 0; rep < 300; ++rep) {
    auto x = normal_sample(rng, 5 + rep % 17, 0.3);
    auto y = normal_sample(rng, 4 + rep % 11);
    if (rep % 3 == 0) {
      for (auto& v : x) v = std::round(v * 2);  // force ties
      for (auto& v : y) v = std::round(v * 2);
    }
    const auto wl = wilcoxon_rank_sum(x, y, Alternative::less);
    const auto wg = wilcoxon_rank_sum(x, y, Alternative::greater);
    if (wl.valid) CHECK(wl.p_value + wg.p_value == 1.0);
    const auto tl = welch_t(x, y, Alternative::less);
    const auto tg = welch_t(x, y, Alternative::greater);
    if (tl.valid) CHECK(tl.p_value + tg.p_value == 1.0);
    const auto two = wilcoxon_rank_sum(x, y, Alternative::two_sided);
    if (wl.valid) CHECK(two.p_value == std::min(1.0, 2 * std::min(wl.p_value, wg.p_value)));
  }
}

TEST_CASE("rank tests are invariant under strictly increasing transforms") {
  Rng rng(5);
  const auto transform = [](std::vector<double> v) {
    for (auto& x : v) x = x * x * x + std::exp(x);
    return v;
  };
  for (int rep = 0; rep < 20; ++rep) {
    const Samples s{normal_sample(rng, 15), normal_sample(rng, 12, 0.5), normal_sample(rng, 9)};
    const Samples t{transform(s[0]), transform(s[1]), transform(s[2])};
    CHECK(kruskal_wallis(s).statistic == kruskal_wallis(t).statistic);
    CHECK(kruskal_wallis(s).p_value == kruskal_wallis(t).p_value);
    CHECK(wilcoxon_rank_sum(s[0], s[1], Alternative::less).p_value ==
          wilcoxon_rank_sum(t[0], t[1], Alternative::less).p_value);
    CHECK(ks_two_sample(s[0], s[2]).statistic == ks_two_sample(t[0], t[2]).statistic);
    CHECK(ks_two_sample(s[0], s[2]).p_value == ks_two_sample(t[0], t[2]).p_value);
  }
}

TEST_CASE("two-group Kruskal-Wallis equals squared Wilcoxon z") {
  Rng rng(9);
  for (int rep = 0; rep < 30; ++rep) {
    const auto x = normal_sample(rng, 10 + rep, 0.4);
    const auto y = normal_sample(rng, 8 + rep);
    const auto kw = kruskal_wallis(Samples{x, y});
    const auto w = wilcoxon_rank_sum(x, y, Alternative::two_sided);
    const auto wl = wilcoxon_rank_sum(x, y, Alternative::less);
    const double z = norm_quantile(wl.p_value);
    CHECK(kw.statistic == doctest::Approx(z * z).epsilon(1e-8));
    CHECK(kw.p_value == doctest::Approx(w.p_value).epsilon(1e-10));
  }
}

TEST_CASE("ks_two_sample") {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, 5, 6};
  const auto same = ks_two_sample(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  const auto apart = ks_two_sample(a, b);
  CHECK(apart.statistic == 1.0);
  CHECK(apart.p_value == doctest::Approx(2 * (std::exp(-3.0) - std::exp(-12.0) + std::exp(-27.0))).epsilon(1e-12));
  // ties within and across samples
  const auto tied = ks_two_sample(std::vector<double>{1, 2, 2, 5, 8}, std::vector<double>{2, 3, 7, 7.5});
  CHECK(tied.statistic == doctest::Approx(0.35).epsilon(1e-14));
  CHECK(tied.p_value == doctest::Approx(kolmogorov_sf(0.35 * std::sqrt(20.0 / 9.0))).epsilon(1e-14));
  CHECK_THROWS_AS(ks_two_sample(a, std::vector<double>{}), EmptyInput);
}

TEST_CASE("lilliefors") {
  std::vector<double> grid(50);
  for (int i = 0; i < 50; ++i) grid[i] = norm_quantile((i + 0.5) / 50.0);
  CHECK(lilliefors(grid, 10000, 1).p_value > 0.5);

  std::vector<double> spike(50, 0.0);
  spike.back() = 1.0;
  CHECK(lilliefors(spike, 10000, 1).p_value < 0.01);

  Rng rng(2);
  const auto x = normal_sample(rng, 40);
  CHECK(lilliefors(x, 500, 77).p_value == lilliefors(x, 500, 77).p_value);

  CHECK_THROWS_AS(lilliefors(std::vector<double>{1, 2, 3}, 100, 1), InsufficientGroupSize);
  CHECK_THROWS_AS(lilliefors(std::vector<double>{2, 2, 2, 2}, 100, 1), ZeroVariance);
}

TEST_CASE("holm_adjust") {
  const auto a = holm_adjust(std::vector<double>{0.01, 0.04, 0.03});
  CHECK(a[0] == doctest::Approx(0.03));
  CHECK(a[1] == doctest::Approx(0.06));
  CHECK(a[2] == doctest::Approx(0.06));
  CHECK(holm_adjust(std::vector<double>{0.2}) == std::vector<double>{0.2});
  CHECK(holm_adjust(std::vector<double>{1.0, 1.0}) == std::vector<double>{1.0, 1.0});
  const auto b = holm_adjust(std::vector<double>{0.2, 0.01, 0.5, 0.03, 0.011});
  const std::vector<double> expected{0.4, 0.05, 0.5, 0.09, 0.05};  // statsmodels multipletests
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  CHECK_THROWS_AS(holm_adjust(std::vector<double>{0.5, 1.2}), OutOfRange);
}

TEST_CASE("null p-values are uniform") {
  constexpr int reps = 2000;
  Rng rng(2024);
  std::vector<double> kw, hov, welch, wil, t, ks, lil;
  for (int rep = 0; rep < reps; ++rep) {
    const Samples s{normal_sample(rng, 40), normal_sample(rng, 35), normal_sample(rng, 30)};
    kw.push_back(kruskal_wallis(s).p_value);
    hov.push_back(anova_f(s, true).p_value);
    welch.push_back(anova_f(s, false).p_value);
    wil.push_back(wilcoxon_rank_sum(s[0], s[1], Alternative::less).p_value);
    t.push_back(welch_t(s[0], s[2], Alternative::less).p_value);
    // coprime sizes keep the lattice of attainable D values fine
    const auto big_x = normal_sample(rng, 500);
    const auto big_y = normal_sample(rng, 433);
    ks.push_back(ks_two_sample(big_x, big_y).p_value);
    lil.push_back(lilliefors(s[2], 200, static_cast<std::uint64_t>(rep)).p_value);
  }
  CHECK(uniform_ks_distance(kw) < 0.05);
  CHECK(uniform_ks_distance(hov) < 0.05);
  CHECK(uniform_ks_distance(welch) < 0.05);
  CHECK(uniform_ks_distance(wil) < 0.05);
  CHECK(uniform_ks_distance(t) < 0.05);
  CHECK(uniform_ks_distance(ks) < 0.05);
  CHECK(uniform_ks_distance(lil) < 0.05);
}

TEST_CASE("names round-trip") {
  for (const auto k : {TestKind::kruskal_wallis, TestKind::anova_f_hov, TestKind::anova_f_welch, TestKind::wilcoxon,
                       TestKind::welch_t, TestKind::ks_two_sample, TestKind::lilliefors}) {
    CHECK(parse_test_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_test_kind("anova").has_value());
  CHECK(parse_alternative("less") == Alternative::less);
}
