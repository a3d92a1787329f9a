#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "cvqkd/attacks.hpp"
#include "support.hpp"

using namespace cvqkd;
using Eigen::MatrixXd;

TEST_CASE("eve_cm") {
  CHECK(eve_cm({1.0, 0.0, 0.0}).matrix() == MatrixXd::Identity(4, 4));

  MatrixXd want(4, 4);
  want << 2, 0, 1, 0,  //
      0, 2, 0, -1,     //
      1, 0, 2, 0,      //
      0, -1, 0, 2;
  CHECK(eve_cm({2.0, 1.0, -1.0}).matrix() == want);

  // Well-formed but unphysical.
  CHECK_NOTHROW(eve_cm({3.0, 5.0, 0.0}));
  CHECK_FALSE(is_physical({3.0, 5.0, 0.0}));
  CHECK_FALSE(is_bona_fide(eve_cm({3.0, 5.0, 0.0})));

  CHECK_THROWS_AS(eve_cm({0.5, 0.0, 0.0}), InvalidArgument);
}

TEST_CASE("physicality checks") {
  CHECK(is_physical({1.0, 0.0, 0.0}));
  CHECK_FALSE(is_physical({1.0, 0.1, 0.0}));
  CHECK_FALSE(is_physical({0.9, 0.0, 0.0}));
  CHECK_FALSE(is_physical({2.0, 2.0, 0.0}));
  CHECK_FALSE(is_physical({2.0, std::nan(""), 0.0}));
  CHECK(is_physical({2.0, 1.0, 1.0}));
  CHECK(is_physical({2.0, std::sqrt(3.0), -std::sqrt(3.0)}));
  CHECK_FALSE(is_physical({2.0, 1.8, -1.8}));  // beyond the EPR boundary
  CHECK_FALSE(is_physical({2.0, 1.1, 1.1}));   // beyond the separable boundary

  const auto msg = physicality_violation({3.0, 5.0, 0.0});
  REQUIRE(msg.has_value());
  CHECK(msg->find("|g| < omega") != std::string::npos);
  CHECK_FALSE(physicality_violation({2.0, -1.0, -1.0}).has_value());

  CHECK_THROWS_AS(require_physical({2.0, 1.1, 1.1}), UnphysicalState);
  CHECK_NOTHROW(require_physical({2.0, 1.0, 1.0}));
}

TEST_CASE("attack classes at omega = 2") {
  const double s3 = std::sqrt(3.0);
  CHECK(attack_from_class(AttackLabel::collective, 2.0) == AttackParams{2.0, 0.0, 0.0});
  CHECK(attack_from_class(AttackLabel::epr_pos, 2.0) == AttackParams{2.0, s3, -s3});
  CHECK(attack_from_class(AttackLabel::epr_neg, 2.0) == AttackParams{2.0, -s3, s3});
  CHECK(attack_from_class(AttackLabel::sep_sym_pos, 2.0) == AttackParams{2.0, 1.0, 1.0});
  CHECK(attack_from_class(AttackLabel::sep_sym_neg, 2.0) == AttackParams{2.0, -1.0, -1.0});
  CHECK(attack_from_class(AttackLabel::sep_anti_pos, 2.0) == AttackParams{2.0, 1.0, -1.0});
  CHECK(attack_from_class(AttackLabel::sep_anti_neg, 2.0) == AttackParams{2.0, -1.0, 1.0});
  CHECK(attack_from_class(AttackClass::custom(0.3, -0.2), 2.0) == AttackParams{2.0, 0.3, -0.2});
  CHECK_THROWS_AS(attack_from_class(AttackLabel::collective, 0.99), InvalidArgument);

  for (auto label : named_attack_labels()) {
    for (double w : {1.0, 1.001, 1.5, 2.0, 3.0, 10.0, 100.0}) {
      CHECK(is_physical(attack_from_class(label, w)));
    }
  }
}

TEST_CASE("label names") {
  for (auto label : named_attack_labels()) {
    const auto back = parse_attack_label(to_string(label));
    REQUIRE(back.has_value());
    CHECK(*back == label);
  }
  CHECK(to_string(AttackLabel::sep_sym_neg) == "sep-sym-");
  CHECK(to_string(AttackLabel::epr_pos) == "epr+");
  CHECK(parse_attack_label("custom") == AttackLabel::custom);
  CHECK(parse_attack_label("a") == AttackLabel::epr_pos);
  CHECK(parse_attack_label("b") == AttackLabel::sep_sym_pos);
  CHECK(parse_attack_label("c") == AttackLabel::sep_anti_pos);
  CHECK(parse_attack_label("d") == AttackLabel::sep_sym_neg);
  CHECK_FALSE(parse_attack_label("e").has_value());
  CHECK_FALSE(parse_attack_label("EPR+").has_value());
  CHECK(named_attack_labels().size() == 7);
}

TEST_CASE("classification") {
  CHECK(classify({2.0, 0.0, 0.0}) == CorrelationKind::collective);
  CHECK(classify({2.0, std::sqrt(3.0), -std::sqrt(3.0)}) == CorrelationKind::entangled);
  CHECK(classify({2.0, -1.0, -1.0}) == CorrelationKind::separable_correlated);
  CHECK(classify({2.0, 1.0, -1.0}) == CorrelationKind::separable_correlated);
  CHECK(classify({2.0, 1e-13, 0.0}) == CorrelationKind::collective);
  CHECK_THROWS_AS(classify({2.0, 1.5, 1.5}), UnphysicalState);
}

TEST_CASE("physical region grid") {
  const auto one = physical_region_grid(1.0, 0.1);
  REQUIRE(one.size() == 1);
  CHECK(one.front() == AttackParams{1.0, 0.0, 0.0});

  const auto grid = physical_region_grid(2.0, 0.5);
  auto has = [&](double g, double gp) {
    return std::any_of(grid.begin(), grid.end(), [&](const AttackParams& a) { return a.g == g && a.g_prime == gp; });
  };
  CHECK(has(-1.0, -1.0));
  CHECK(has(0.0, 0.0));
  CHECK_FALSE(has(2.0, 2.0));
  CHECK_FALSE(has(1.5, 1.5));

  // Row-major: g outer, g' inner, both ascending.
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const bool ordered = grid[i - 1].g < grid[i].g ||
                         (grid[i - 1].g == grid[i].g && grid[i - 1].g_prime < grid[i].g_prime);
    CHECK(ordered);
  }
  for (const auto& a : grid) CHECK_NOTHROW(classify(a));

  CHECK_THROWS_AS(physical_region_grid(2.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(physical_region_grid(0.5, 0.1), InvalidArgument);
}

// ---------------------------------------------------------------- properties

TEST_CASE("property: extremal classes saturate physicality") {
  support::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const double w = rng.uniform(1.0001, 20.0);
    for (auto label : {AttackLabel::epr_pos, AttackLabel::epr_neg}) {
      const auto cm = eve_cm(attack_from_class(label, w));
      CHECK(std::abs(symplectic_spectrum(cm).min() - 1.0) < 1e-9);
    }
    for (auto label : {AttackLabel::sep_sym_pos, AttackLabel::sep_sym_neg}) {
      const auto cm = eve_cm(attack_from_class(label, w));
      CHECK(std::abs(symplectic_spectrum(cm).min() - 1.0) < 1e-9);
      CHECK(ppt_separable(cm));
    }
  }
}

TEST_CASE("property: physicality agrees with the closed-form oracle") {
  support::Rng rng(32);
  int agree = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const double w = rng.uniform(1.0, 6.0);
    const double g = rng.uniform(-w, w);
    const double gp = rng.uniform(-w, w);
    const auto [hi, lo] = support::eve_spectrum(w, g, gp);
    (void)hi;
    if (std::abs(lo - 1.0) < 1e-6) continue;
    CHECK(is_physical({w, g, gp}) == support::eve_physical(w, g, gp));
    ++agree;
  }
  CHECK(agree > 1900);
}

TEST_CASE("property: swap and sign symmetry") {
  support::Rng rng(33);
  for (int trial = 0; trial < 500; ++trial) {
    const double w = rng.uniform(1.0, 5.0);
    const double g = rng.uniform(-w, w);
    const double gp = rng.uniform(-w, w);
    const bool p = is_physical({w, g, gp});
    CHECK(is_physical({w, gp, g}) == p);
    CHECK(is_physical({w, -g, -gp}) == p);
    if (!p) continue;
    const auto base = symplectic_spectrum(eve_cm({w, g, gp}));
    const auto swapped = symplectic_spectrum(eve_cm({w, gp, g}));
    const auto flipped = symplectic_spectrum(eve_cm({w, -g, -gp}));
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(swapped[k] == doctest::Approx(base[k]).epsilon(1e-12));
      CHECK(flipped[k] == doctest::Approx(base[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: grid is closed under swap and negation") {
  for (double w : {1.5, 2.0, 3.0}) {
    for (double step : {0.1, 0.25}) {
      std::set<std::pair<long, long>> cells;
      for (const auto& a : physical_region_grid(w, step)) {
        cells.insert({std::lround(a.g / step), std::lround(a.g_prime / step)});
      }
      for (const auto& [i, j] : cells) {
        CHECK(cells.count({j, i}) == 1);
        CHECK(cells.count({-i, -j}) == 1);
      }
    }
  }
}

TEST_CASE("property: grid filter matches the oracle per lattice point") {
  const double w = 2.0;
  const double step = 0.05;
  const auto grid = physical_region_grid(w, step);
  std::set<std::pair<long, long>> cells;
  for (const auto& a : grid) cells.insert({std::lround(a.g / step), std::lround(a.g_prime / step)});
  const long n = std::lround(w / step);
  for (long i = -n; i <= n; ++i) {
    for (long j = -n; j <= n; ++j) {
      const double g = static_cast<double>(i) * step;
      const double gp = static_cast<double>(j) * step;
      const auto [hi, lo] = support::eve_spectrum(w, g, gp);
      (void)hi;
      if (std::abs(lo - 1.0) < 1e-7) continue;  // boundary cells are tolerance-dependent
      CHECK((cells.count({i, j}) == 1) == support::eve_physical(w, g, gp));
    }
  }
}
