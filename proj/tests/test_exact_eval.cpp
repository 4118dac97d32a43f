#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mwadv/exact_eval.hpp"
#include "mwadv/rng.hpp"

using namespace mwadv;

namespace {
const double kInvE = std::exp(-1.0);
const double kE = std::exp(1.0);

ModelParams half(int n) { return ModelParams(kInvE, 0.5, n, 0.5); }

OfflinePolicy from_mask(int mask, int n) {
  std::vector<Decision> d(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) d[static_cast<std::size_t>(k)] = (mask >> k) & 1 ? Decision::Truth : Decision::Lie;
  return OfflinePolicy(std::move(d));
}
}  // namespace

TEST_CASE("false and true block values") {
  CHECK(value_false(0, 0.5, half(4)) == 0.0);
  CHECK(value_false(1, 0.5, half(4)) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(value_false(2, 0.5, half(4)) == doctest::Approx(1.0 + 0.375 + 0.25 / (1.0 + kE)).epsilon(1e-12));
  CHECK(value_false(2, 0.5, half(4)) == doctest::Approx(1.442235).epsilon(1e-6));
  CHECK(value_true(0, 0.5, half(4)) == 0.0);
  CHECK(value_true(1, 0.5, half(4)) == doctest::Approx(0.25).epsilon(1e-12));
  ModelParams sq(kInvE, 0.5, 4, 0.5, LossFunction::custom([](double e) { return e * e; }, "square"));
  CHECK(value_true(1, 0.5, sq) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK_THROWS_AS(value_false(5, 0.5, half(4)), DomainError);
}

TEST_CASE("offset distributions") {
  auto point = offset_distribution(0, 0, 0.3);
  CHECK(point.support_min() == 0);
  CHECK(point.mass(0) == 1.0);
  auto one = offset_distribution(1, 0, 0.3);
  CHECK(one.mass(1) == doctest::Approx(0.3));
  CHECK(one.mass(0) == doctest::Approx(0.7));
  auto both = offset_distribution(1, 1, 0.5);
  CHECK(both.mass(-1) == doctest::Approx(0.25));
  CHECK(both.mass(0) == doctest::Approx(0.5));
  CHECK(both.mass(1) == doctest::Approx(0.25));
  CHECK(both.mass(5) == 0.0);

  for (int n : {0, 3, 17}) {
    for (int m : {0, 4, 11}) {
      auto d = offset_distribution(n, m, 0.37);
      CHECK(d.support_min() >= -m);
      CHECK(d.support_max() <= n);
      CHECK(std::abs(d.total() - 1.0) < 1e-12);
      for (double x : d.masses()) CHECK(x >= 0.0);
      CHECK(d.expect([](int j) { return double(j); }) == doctest::Approx(n * 0.37 - m * 0.63).epsilon(1e-10));
    }
  }
}

TEST_CASE("final offset law ignores block order") {
  const double mu = 0.42;
  auto a = OffsetDistribution().after_lies(3, mu).after_truths(2, mu).after_lies(4, mu).after_truths(5, mu);
  auto b = OffsetDistribution().after_truths(7, mu).after_lies(7, mu);
  auto c = offset_distribution(7, 7, mu);
  REQUIRE(a.support_min() == c.support_min());
  REQUIRE(b.support_min() == c.support_min());
  for (int j = c.support_min(); j <= c.support_max(); ++j) {
    CHECK(std::abs(a.mass(j) - c.mass(j)) < 1e-14);
    CHECK(std::abs(b.mass(j) - c.mass(j)) < 1e-14);
  }
}

TEST_CASE("block policy values") {
  auto p = half(2);
  CHECK(value_block_policy(BlockForm{{{1, 1}}}, p) ==
        doctest::Approx(0.75 + 0.125 + 0.5 * (0.5 - 0.5 / (1.0 + kE))).epsilon(1e-12));
  CHECK(std::abs(value_block_policy(BlockForm{{{1, 1}}}, p) - 1.057765) < 1e-6);
  CHECK_THROWS_AS(value_block_policy(BlockForm{{{1, 2}}}, p), DomainError);

  for (double mu : {0.3, 0.5, 0.7}) {
    for (int n : {1, 5, 13}) {
      ModelParams q(0.45, mu, n, 0.35);
      CHECK(value_block_policy(BlockForm{{{n, 0}}}, q) == value_false(n, 0.35, q));
      CHECK(value_block_policy(BlockForm{{{0, n}}}, q) == value_true(n, 0.35, q));
    }
  }
}

TEST_CASE("brute force anchors") {
  CHECK(brute_force_value(false_policy(1), half(1)) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(brute_force_value(true_policy(1), half(1)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(brute_force_value(false_policy(2), half(2)) == doctest::Approx(1.442235).epsilon(1e-6));
  CHECK(std::abs(brute_force_value(OfflinePolicy::parse("FT"), half(2)) - 1.057765) < 1e-6);
  // mu is open at 1; approach the single-path limit 0.5 + 1/(1+e).
  ModelParams sure(kInvE, 1.0 - 1e-13, 2, 0.5);
  CHECK(brute_force_value(false_policy(2), sure) == doctest::Approx(0.5 + 1.0 / (1.0 + kE)).epsilon(1e-9));
  CHECK_THROWS_AS(brute_force_value(false_policy(23), half(23)), GuardViolation);
}

TEST_CASE("block evaluator matches path enumeration") {
  double worst = 0.0;
  for (double mu : {0.3, 0.5, 0.7}) {
    for (int n = 1; n <= 10; ++n) {
      ModelParams p(kInvE, mu, n, 0.5);
      for (int mask = 0; mask < (1 << n); ++mask) {
        auto pol = from_mask(mask, n);
        worst = std::max(worst, std::abs(value_policy(pol, p) - brute_force_value(pol, p)));
      }
    }
  }
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 11 + static_cast<int>(seed % 4);
    const double mu = 0.2 + 0.6 * static_cast<double>(seed % 7) / 6.0;
    ModelParams p(0.25 + 0.5 * static_cast<double>(seed % 5) / 4.0, mu, n, 0.2 + 0.1 * static_cast<double>(seed % 6));
    auto pol = random_policy(n, 0.5, seed);
    worst = std::max(worst, std::abs(value_policy(pol, p) - brute_force_value(pol, p)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("false policy value is monotone and bounded below") {
  for (double mu : {0.3, 0.5, 0.8}) {
    ModelParams p(kInvE, mu, 60, 0.5);
    for (int n = 1; n <= 60; ++n) {
      CHECK(value_false(n, 0.5, p) >= value_false(n - 1, 0.5, p));
      CHECK(value_false(n, 0.5, p) >= (1.0 - mu) * n - 1e-12);
      for (double rho = 0.05; rho < 0.85; rho += 0.1) CHECK(value_false(n, rho + 0.1, p) >= value_false(n, rho, p));
    }
  }
}

TEST_CASE("exhaustive offline optimum") {
  for (double mu : {0.3, 0.5}) {
    ModelParams p(kInvE, mu, 1, 0.4);
    auto o = exhaustive_offline_optimum(p);
    CHECK(o.policy == false_policy(1));
    CHECK(o.value == doctest::Approx(1 - mu + mu * 0.4).epsilon(1e-12));
  }
  auto two = exhaustive_offline_optimum(half(2));
  CHECK(two.policy == false_policy(2));
  CHECK(two.value == doctest::Approx(1.442235).epsilon(1e-6));

  for (int n : {6, 9}) {
    ModelParams p(kInvE, 0.4, n, 0.5);
    double best = -1.0;
    for (int mask = 0; mask < (1 << n); ++mask) best = std::max(best, brute_force_value(from_mask(mask, n), p));
    auto o = exhaustive_offline_optimum(p);
    CHECK(o.value == doctest::Approx(best).epsilon(1e-12));
    CHECK(brute_force_value(o.policy, p) == doctest::Approx(o.value).epsilon(1e-12));
  }
  for (int n = 2; n <= 14; n += 4) {
    auto p = half(n);
    auto o = exhaustive_offline_optimum(p);
    CHECK(o.value >= value_false(n, 0.5, p) - 1e-12);
    CHECK(o.value >= value_true(n, 0.5, p) - 1e-12);
    CHECK(o.value >= value_block_policy(ratio_policy(p).blocks, p) - 1e-12);
  }
  CHECK_THROWS_AS(exhaustive_offline_optimum(half(27)), GuardViolation);
}

TEST_CASE("bonus term") {
  auto single = bonus_term(BlockForm{{{9, 0}}}, half(9));
  CHECK(single.exact == 0.0);
  REQUIRE(single.exact_terms.size() == 1);

  auto pair = bonus_term(BlockForm{{{1, 1}}}, half(2));
  const double expected = 0.25 * (1.0 / (1.0 + kInvE) + 1.0 + 1.0 / (1.0 + kE)) - 0.5 * (0.5 + 1.0 / (1.0 + kE));
  CHECK(pair.exact == doctest::Approx(expected).epsilon(1e-12));
  CHECK(pair.exact == doctest::Approx(0.115529).epsilon(1e-6));

  auto p = half(64);
  auto r = ratio_policy(p);
  auto b = bonus_term(r.blocks, p);
  REQUIRE(b.approx_terms.size() == r.blocks.blocks.size());
  double sum_exact = 0.0, sum_approx = 0.0;
  for (std::size_t i = 0; i < b.approx_terms.size(); ++i) {
    sum_exact += b.exact_terms[i];
    sum_approx += b.approx_terms[i];
    if (r.blocks.blocks[i].truths > 0) {
      CHECK(b.moments[i].mean_after_truths == doctest::Approx(0.0));
      CHECK(b.approx_terms[i] > 0.0);
    }
  }
  CHECK(std::abs(sum_exact - b.exact) < 1e-9);
  CHECK(std::abs(sum_approx - b.normal_approx) < 1e-9);
}

TEST_CASE("telescoping residuals") {
  auto t = telescoping_residuals(0.0, 1.0);
  CHECK(t.eps_r == doctest::Approx(0.5 + std::log(2.0 / (1.0 + kE))).epsilon(1e-12));
  CHECK(t.eps_r == doctest::Approx(-0.120115).epsilon(1e-5));
  CHECK(t.eps_bound == doctest::Approx(-0.231059).epsilon(1e-5));
  CHECK(std::abs(telescoping_residuals(50.0, 1.0).eps_r) < 1e-9);
  for (double a : {0.1, 1.0, 10.0}) {
    for (int i = 0; i <= 200; ++i) {
      auto x = telescoping_residuals(0.25 * i, a);
      CHECK(x.eps_bound <= x.eps_r + 1e-15);
      CHECK(x.eps_r <= 1e-15);
      CHECK(x.delta_r >= -1e-15);
      CHECK(x.delta_r <= x.delta_bound + 1e-15);
    }
  }
}

TEST_CASE("berry esseen check") {
  auto z = berry_esseen_check(0, 0, 0.3);
  CHECK(z.exact == 0.5);
  CHECK(z.approx == 0.5);
  CHECK(z.error == 0.0);
  for (int n : {1, 10, 40}) {
    auto s = berry_esseen_check(n, n, 0.5);
    CHECK(s.approx == 0.5);
    CHECK(s.exact == doctest::Approx(0.5).epsilon(1e-12));
  }
  double first = 0.0, last = 0.0;
  for (int n : {10, 40, 160}) {
    auto b = berry_esseen_check(n, n, 0.3);
    CHECK(b.sigma == doctest::Approx(std::sqrt(0.21 * 2 * n)));
    if (n == 10) first = b.error * b.sigma;
    last = b.error * b.sigma;
    CHECK(b.error * b.sigma <= 1.0);
  }
  CHECK(last <= first);
}

TEST_CASE("no adversary value") {
  for (double mu : {0.2, 0.5, 0.9}) {
    for (int n : {1, 7, 40}) {
      ModelParams p(kInvE, mu, n, 0.3);
      CHECK(no_adversary_value(p) == doctest::Approx(n * (1.0 - mu)).epsilon(1e-12));
    }
  }
}
