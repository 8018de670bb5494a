#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "sdmt/converse.hpp"
#include "sdmt/dmt.hpp"
#include "sdmt/rng.hpp"

using namespace sdmt;

TEST_CASE("amplification threshold and bracket") {
  AmplificationThreshold a = amplification_threshold(2, 0.5, 0.1);
  CHECK(a.n_star == 11);  // smallest N with 0.1 N > 1.0
  CHECK(a.bracket == doctest::Approx(1.0 - 4.4 / 4.5).epsilon(1e-12));
  CHECK(a.bracket > 0.0);

  AmplificationThreshold b = amplification_threshold(1, 0.5, 0.25);
  CHECK(b.n_star == 3);
  CHECK(b.bracket == doctest::Approx(0.25).epsilon(1e-12));

  // Minimality: one step below the threshold the bracket is not positive.
  // (At N = 10 the products tie at 1.0 up to representation noise.)
  CHECK(amplification_bracket(2, 0.5, 0.1, 10) <= 1e-12);
  CHECK(amplification_bracket(1, 0.5, 0.25, 2) <= 1e-12);
  CHECK(amplification_bracket(2, 0.5, 0.1, 11) == doctest::Approx(a.bracket).epsilon(1e-15));

  // Threshold position scans cleanly across a slack sweep.
  for (double delta : {0.05, 0.11, 0.17, 0.26, 0.49}) {
    AmplificationThreshold t = amplification_threshold(2, 0.5, delta);
    CHECK(double(t.n_star) * delta > 2.0 * 0.5);
    CHECK(double(t.n_star - 1) * delta <= 2.0 * 0.5 * (1.0 + 1e-9));
    CHECK(t.bracket > 0.0);
    if (t.n_star - 1 > 2) CHECK(amplification_bracket(2, 0.5, delta, t.n_star - 1) <= 1e-12);
  }

  CHECK_THROWS_AS(amplification_threshold(2, 0.5, 0.5), std::domain_error);
  CHECK_THROWS_AS(amplification_threshold(2, 0.5, 0.6), std::domain_error);
  CHECK_THROWS_AS(amplification_threshold(2, 0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(amplification_threshold(0, 0.5, 0.1), std::domain_error);
  CHECK_THROWS_AS(amplification_bracket(2, 0.5, 0.1, 2), std::domain_error);
}

TEST_CASE("sequential rate budget") {
  BudgetCheck five = siso_budget_check(0.5, 0.1, 5);
  CHECK(five.decodable == doctest::Approx(2.4).epsilon(1e-12));
  CHECK(five.required == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(five.contradiction);

  // Boundary N = r/delta - 1: the budget exactly balances, no contradiction.
  BudgetCheck four = siso_budget_check(0.5, 0.1, 4);
  CHECK(four.decodable == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(four.required == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(four.contradiction);

  // Slack close to the full rate starves the decodable budget immediately.
  for (int n : {1, 2, 7}) CHECK(siso_budget_check(0.5, 0.499999999, n).contradiction);

  // The flip point matches N > r/delta - 1 across a sweep.
  for (double delta : {0.05, 0.1, 0.2, 0.25}) {
    for (int n = 1; n <= 25; ++n) {
      bool expect = double(n) > 0.5 / delta - 1.0 + 1e-9;
      bool tie = std::abs(double(n) - (0.5 / delta - 1.0)) < 1e-9;
      BudgetCheck c = siso_budget_check(0.5, delta, n);
      if (tie) {
        CHECK_FALSE(c.contradiction);  // exact balance is not a contradiction
      } else {
        CHECK(c.contradiction == expect);
      }
    }
  }

  CHECK_THROWS_AS(siso_budget_check(0.5, 0.7, 3), std::domain_error);
  CHECK_THROWS_AS(siso_budget_check(0.5, 0.1, 0), std::domain_error);
}

TEST_CASE("decode-and-amplify trace") {
  const double r = 0.5, delta = 0.1, rho = 100.0;
  const double thr = std::pow(rho, -(1.0 - r + delta));

  AmplificationScenario sc;
  sc.r = r;
  sc.delta = delta;
  sc.rho = rho;
  sc.gains_sq = {thr / 2.0, thr / 3.0};
  AmplificationTrace single = amplification_trace(sc);
  CHECK_FALSE(single.violating_block.has_value());
  REQUIRE(single.steps.size() == 1);
  CHECK(single.steps[0].step == 0);
  CHECK(single.steps[0].membership);
  REQUIRE(single.steps[0].effective_gains.size() == 2);
  CHECK(single.steps[0].effective_gains[0] == thr / 2.0);

  // Four blocks inside the deep-outage region walk through three steps, each
  // with the decoded prefix amplified to unit gain.
  sc.gains_sq = {thr / 2.0, thr / 2.0, thr / 2.0, thr / 2.0};
  AmplificationTrace walk = amplification_trace(sc);
  CHECK_FALSE(walk.violating_block.has_value());
  REQUIRE(walk.steps.size() == 3);
  for (int k = 0; k < 3; ++k) {
    const TraceStep& st = walk.steps[std::size_t(k)];
    CHECK(st.step == k);
    REQUIRE(st.effective_gains.size() == std::size_t(k) + 2);
    for (int j = 0; j < k; ++j) CHECK(st.effective_gains[std::size_t(j)] == 1.0);
    CHECK(st.effective_gains[std::size_t(k)] == thr / 2.0);
    CHECK(st.membership);
  }

  // A gain exactly at the threshold still qualifies (closed region).
  sc.gains_sq = {thr, thr, thr};
  AmplificationTrace edge = amplification_trace(sc);
  CHECK_FALSE(edge.violating_block.has_value());
  CHECK(edge.steps.size() == 2);
  for (const TraceStep& st : edge.steps) CHECK(st.membership);

  // First offending block is reported and nothing is traced.
  sc.gains_sq = {thr / 2.0, 10.0 * thr, thr / 2.0};
  AmplificationTrace bad = amplification_trace(sc);
  REQUIRE(bad.violating_block.has_value());
  CHECK(*bad.violating_block == 1);
  CHECK(bad.steps.empty());

  // Randomized valid scenarios always produce all-true memberships.
  RngSpec rng{77, 0};
  BlockRng draw(rng, 0);
  for (int rep = 0; rep < 200; ++rep) {
    AmplificationScenario rand_sc;
    rand_sc.r = 0.2 + 0.6 * draw.next_unit();
    rand_sc.delta = 0.05 + 0.1 * draw.next_unit();
    rand_sc.rho = 50.0 + 1000.0 * draw.next_unit();
    double cap = std::pow(rand_sc.rho, -(1.0 - rand_sc.r + rand_sc.delta));
    int blocks = 2 + int(draw.next_u64() % 6);
    for (int i = 0; i < blocks; ++i) rand_sc.gains_sq.push_back(cap * draw.next_unit());
    AmplificationTrace t = amplification_trace(rand_sc);
    CHECK_FALSE(t.violating_block.has_value());
    REQUIRE(t.steps.size() == rand_sc.gains_sq.size() - 1);
    for (const TraceStep& st : t.steps) CHECK(st.membership);
  }

  sc.gains_sq = {thr / 2.0};
  CHECK_THROWS_AS(amplification_trace(sc), std::invalid_argument);
  sc.gains_sq = {thr / 2.0, -1.0};
  CHECK_THROWS_AS(amplification_trace(sc), std::invalid_argument);
  sc.gains_sq = {thr / 2.0, thr / 2.0};
  sc.t_delay = 3;
  CHECK_THROWS_AS(amplification_trace(sc), std::invalid_argument);
}

TEST_CASE("single-window bound envelope") {
  EnvelopePoint half = simple_bound_envelope(0.5, 50);
  CHECK(half.envelope == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(half.argmin_n == 0);

  EnvelopePoint zero = simple_bound_envelope(0.0, 50);
  CHECK(zero.envelope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(zero.argmin_n == 0);

  // At unit rate every window bound evaluates to 1; ties go to the smallest.
  EnvelopePoint one = simple_bound_envelope(1.0, 50);
  CHECK(one.envelope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.argmin_n == 0);

  // Past unit rate the bound floors at zero; the first window reaching the
  // floor wins the tie.
  EnvelopePoint past = simple_bound_envelope(1.2, 50);
  CHECK(past.envelope == 0.0);
  CHECK(past.argmin_n == 4);

  // The envelope sits strictly above the delay-2 streaming curve except at
  // the shared endpoint r = 0.
  for (int i = 1; i <= 9; ++i) {
    double r = 0.1 * i;
    CHECK(simple_bound_envelope(r, 50).envelope > streaming_dmt(2, {1, 1}, r));
  }
  CHECK(simple_bound_envelope(0.0, 50).envelope ==
        doctest::Approx(streaming_dmt(2, {1, 1}, 0.0)).epsilon(1e-12));

  CHECK_THROWS_AS(simple_bound_envelope(-0.1, 50), std::domain_error);
  CHECK_THROWS_AS(simple_bound_envelope(0.5, -1), std::domain_error);
}

TEST_CASE("multicast budget bracket") {
  // Pinned arithmetic at rho = 1e6, N = 100.
  const double rho = 1e6;
  const double lg = std::log2(rho);
  double want = 1.0 - (101.0 + 101.0 * 0.4 * lg) / (100.0 * 0.5 * lg);
  CHECK(multicast_bracket(0.5, 0.1, rho, 100) == doctest::Approx(want).epsilon(1e-14));
  CHECK(want == doctest::Approx(0.0906532).epsilon(1e-5));

  // Increasing in N beyond the zero crossing, approaching the N -> inf limit.
  double limit = 1.0 - 0.4 / 0.5 - 1.0 / (0.5 * lg);
  double prev = multicast_bracket(0.5, 0.1, rho, 10);
  for (std::int64_t n : {20, 50, 100, 1000, 100000}) {
    double cur = multicast_bracket(0.5, 0.1, rho, n);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK(prev == doctest::Approx(limit).epsilon(1e-4));

  // Tiny slack at modest window: the budget shows no contradiction.
  CHECK(multicast_bracket(0.5, 0.001, 1000.0, 20) < 0.0);

  std::optional<std::int64_t> min_n = multicast_min_n(0.5, 0.1, rho);
  REQUIRE(min_n.has_value());
  CHECK(*min_n == 10);
  CHECK(multicast_bracket(0.5, 0.1, rho, *min_n) > 0.0);
  CHECK(multicast_bracket(0.5, 0.1, rho, *min_n - 1) <= 0.0);

  // Slack too small for this SNR: delta log2(rho) <= 1 admits no window.
  CHECK_FALSE(multicast_min_n(0.5, 0.1, 100.0).has_value());
  CHECK_FALSE(multicast_min_n(0.5, 0.05, 1e6).has_value());

  CHECK_THROWS_AS(multicast_bracket(0.5, 0.6, rho, 10), std::domain_error);
  CHECK_THROWS_AS(multicast_bracket(0.5, 0.1, 0.9, 10), std::domain_error);
  CHECK_THROWS_AS(multicast_bracket(0.5, 0.1, rho, 0), std::domain_error);
  CHECK_THROWS_AS(multicast_min_n(0.5, 0.1, 0.5), std::domain_error);
}
