#include <doctest.h>

#include "qregret/types.hpp"

using namespace qregret;

TEST_CASE("uniform grid over [0,22] step 1 has 23 integer points") {
  const ValueGrid g = make_uniform_grid(0, 22, 1);
  REQUIRE(g.size() == 23);
  CHECK(g.points.front() == 0.0);
  CHECK(g.points.back() == 22.0);
  for (double w : g.prior) CHECK(w == doctest::Approx(1.0 / 23).epsilon(1e-12));
}

TEST_CASE("two-point grid") {
  const ValueGrid g = make_uniform_grid(0, 100, 100);
  REQUIRE(g.size() == 2);
  CHECK(g.points[0] == 0.0);
  CHECK(g.points[1] == 100.0);
  CHECK(g.prior[0] == 0.5);
  CHECK(g.prior[1] == 0.5);
}

TEST_CASE("grid over [1,60] step 1") {
  const ValueGrid g = make_uniform_grid(1, 60, 1);
  REQUIRE(g.size() == 60);
  CHECK(g.points.front() == 1.0);
  CHECK(g.points.back() == 60.0);
}

TEST_CASE("grid size bounds and uniform gaps") {
  const struct { double lo, hi, step; } cases[] = {
      {0, 1, 0.3}, {0, 22, 1}, {-2, 2, 0.5}, {0, 1, 0.1}, {1.5, 9.25, 0.25},
  };
  for (const auto& c : cases) {
    CAPTURE(c.lo);
    CAPTURE(c.step);
    const ValueGrid g = make_uniform_grid(c.lo, c.hi, c.step);
    const double span = (c.hi - c.lo) / c.step;
    CHECK(g.size() >= static_cast<std::size_t>(std::floor(span)) + 1);
    CHECK(g.size() <= static_cast<std::size_t>(std::ceil(span)) + 1);
    for (std::size_t j = 0; j + 1 < g.size(); ++j)
      CHECK(std::abs((g.points[j + 1] - g.points[j]) - c.step) <= 1e-12);
  }
}

TEST_CASE("grid rejects bad arguments") {
  CHECK_THROWS_AS(make_uniform_grid(0, 22, 0), validation_error);
  CHECK_THROWS_AS(make_uniform_grid(0, 22, -1), validation_error);
  CHECK_THROWS_AS(make_uniform_grid(5, 5, 1), validation_error);
  CHECK_THROWS_AS(make_uniform_grid(0, 22, std::nan("")), validation_error);
}

TEST_CASE("non-uniform prior must sum to one") {
  CHECK_THROWS_AS(make_grid_with_prior({0, 1}, {0.9, 0.2}), validation_error);
  CHECK_NOTHROW(make_grid_with_prior({0, 1}, {0.7, 0.3}));
  CHECK_THROWS_AS(make_grid_with_prior({1, 0}, {0.5, 0.5}), validation_error);
}

TEST_CASE("validate_freq accepts the worked-example table") {
  const Freq2x2 f{0.07, 0.04, 0.61, 0.28, 200};
  CHECK_NOTHROW(validate_freq(f));
  CHECK(f.left_marginal() == doctest::Approx(0.68));
  CHECK(f.up_marginal() == doctest::Approx(0.11));
}

TEST_CASE("validate_freq accepts degenerate pure play") {
  CHECK_NOTHROW(validate_freq(Freq2x2{1, 0, 0, 0, 1}));
}

TEST_CASE("validate_freq names the offending field") {
  try {
    validate_freq(Freq2x2{0.5, 0.5, 0.5, -0.5, 10});
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    CHECK(std::string(e.what()).find("f_DR") != std::string::npos);
  }
  CHECK_THROWS_AS(validate_freq(Freq2x2{0.5, 0.5, 0.5, 0.5, 10}), validation_error);
  CHECK_THROWS_AS(validate_freq(Freq2x2{0.25, 0.25, 0.25, 0.25, 0}), validation_error);
}

TEST_CASE("freq transpose swaps the off-diagonal cells") {
  const Freq2x2 f{0.1, 0.2, 0.3, 0.4, 50};
  const Freq2x2 t = f.transposed();
  CHECK(t.f_ul == 0.1);
  CHECK(t.f_ur == 0.3);
  CHECK(t.f_dl == 0.2);
  CHECK(t.f_dr == 0.4);
}

TEST_CASE("game spec payoff accessors and transpose mirror") {
  GameSpec2x2 spec;
  spec.row_payoffs = {10.0, 0.0, 9.0, 10.0};
  spec.col_payoffs = {8.0, 18.0, 9.0, 8.0};
  spec.constant_sum = 18.0;
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.payoff(Slot::kRowUL) == 10.0);
  CHECK(spec.payoff(Slot::kColUR) == 18.0);

  const GameSpec2x2 t = spec.transposed();
  for (Slot s : kAllSlots) CHECK(t.payoff(transposed_slot(s)) == spec.payoff(s));
  // Transposing twice is the identity.
  const GameSpec2x2 tt = t.transposed();
  for (Slot s : kAllSlots) CHECK(tt.payoff(s) == spec.payoff(s));
}

TEST_CASE("constant-sum consistency is validated") {
  GameSpec2x2 spec;
  spec.row_payoffs = {10.0, 0.0, 9.0, 10.0};
  spec.col_payoffs = {8.0, 18.0, 9.0, 9.0};  // 10 + 9 != 18
  spec.constant_sum = 18.0;
  CHECK_THROWS_AS(spec.validate(), validation_error);
  spec.col_payoffs[3] = 8.0;
  CHECK_NOTHROW(spec.validate());
  spec.set_payoff(Slot::kColDR, std::nullopt);  // hidden slots are exempt
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.hidden_slots().size() == 1);
}

TEST_CASE("bid log validation") {
  BidLog log;
  log.player_ids = {"p1", "p2"};
  log.rounds = {{5, 3}, {4, 4}};
  CHECK_NOTHROW(log.validate());
  CHECK(log.player_index("p2") == 1);
  CHECK(log.player_index("zz") == -1);

  log.rounds.push_back({1});
  CHECK_THROWS_AS(log.validate(), validation_error);
  log.rounds.pop_back();
  log.rounds[0][0] = -1;
  CHECK_THROWS_AS(log.validate(), validation_error);
}

TEST_CASE("second half keeps rounds floor(T/2)+1..T") {
  BidLog log;
  log.player_ids = {"p1"};
  for (int t = 1; t <= 5; ++t) log.rounds.push_back({static_cast<double>(t)});
  const BidLog half = log.second_half();
  REQUIRE(half.num_rounds() == 3);
  CHECK(half.rounds[0][0] == 3.0);
  CHECK(half.rounds[2][0] == 5.0);
}

TEST_CASE("auction spec validation") {
  AuctionSpec spec{Mechanism::kGsp, {0.38, 0.29, 0.20, 0.11, 0.02}, 5, TieRule::kLowestIdWins};
  CHECK_NOTHROW(spec.validate());
  spec.ctrs = {0.2, 0.2};
  CHECK_THROWS_AS(spec.validate(), validation_error);
  spec = AuctionSpec{Mechanism::kFirstPrice, {0.5}, 2, TieRule::kLowestIdWins};
  CHECK_THROWS_AS(spec.validate(), validation_error);
  spec.ctrs = {1.0};
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("shortest round-trip double formatting") {
  for (double x : {0.07, 1.0 / 3.0, 13.705882352941176, 1e-9, 0.0, 22.0}) {
    CHECK(parse_double(format_double(x), "t") == x);
  }
  CHECK(format_double(0.07) == "0.07");
}
