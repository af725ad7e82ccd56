#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "qregret/matrix2x2.hpp"
#include "qregret/synth.hpp"
#include "test_util.hpp"

using namespace qregret;
using qregret::testing::near;

namespace {

GameSpec2x2 game1() {
  GameSpec2x2 spec;
  spec.row_payoffs = {10.0, 0.0, 9.0, 10.0};
  spec.col_payoffs = {8.0, 18.0, 9.0, 8.0};
  spec.constant_sum = 18.0;
  return spec;
}

const Freq2x2 kGame1Freq{0.07, 0.04, 0.61, 0.28, 200};

Session2x2 uniform_session(const Freq2x2& table, const std::string& game_id = "game1",
                           const std::string& session_id = "s1") {
  Session2x2 s;
  s.game_id = game_id;
  s.session_id = session_id;
  for (int i = 0; i < 4; ++i)
    s.players.push_back({"r" + std::to_string(i + 1), PlayerRole::kRow, table});
  for (int i = 0; i < 4; ++i)
    s.players.push_back({"c" + std::to_string(i + 1), PlayerRole::kCol, table});
  return s;
}

// A completely mixed game: equilibrium marginals p = P(Up) = 2/3 (from the
// column payoffs), q = P(Left) = 3/7 (from the row payoffs).
GameSpec2x2 mixed_game() {
  GameSpec2x2 spec;
  spec.row_payoffs = {6.0, 1.0, 2.0, 4.0};
  spec.col_payoffs = {2.0, 5.0, 7.0, 1.0};
  return spec;
}

Freq2x2 product_freq(double p_up, double q_left, int periods = 100) {
  Freq2x2 f;
  f.f_ul = p_up * q_left;
  f.f_ur = p_up * (1 - q_left);
  f.f_dl = (1 - p_up) * q_left;
  f.f_dr = (1 - p_up) * (1 - q_left);
  f.periods = periods;
  return f;
}

}  // namespace

TEST_CASE("session aggregation averages the eight tables") {
  const Session2x2 s = uniform_session(kGame1Freq);
  const Freq2x2 agg = aggregate_session(s);
  CHECK(near(agg.f_ul, 0.07, 1e-12));
  CHECK(near(agg.f_dr, 0.28, 1e-12));

  Session2x2 split;
  split.game_id = "g";
  split.session_id = "s";
  for (int i = 0; i < 4; ++i)
    split.players.push_back({"r" + std::to_string(i), PlayerRole::kRow, Freq2x2{1, 0, 0, 0, 10}});
  for (int i = 0; i < 4; ++i)
    split.players.push_back({"c" + std::to_string(i), PlayerRole::kCol, Freq2x2{0, 0, 0, 1, 10}});
  const Freq2x2 mixed = aggregate_session(split);
  CHECK(near(mixed.f_ul, 0.5, 1e-12));
  CHECK(near(mixed.f_ur, 0.0, 1e-12));
  CHECK(near(mixed.f_dl, 0.0, 1e-12));
  CHECK(near(mixed.f_dr, 0.5, 1e-12));
  CHECK(near(mixed.f_ul + mixed.f_ur + mixed.f_dl + mixed.f_dr, 1.0, 1e-12));
}

TEST_CASE("session validation requires 4 row and 4 column players") {
  Session2x2 s = uniform_session(kGame1Freq);
  s.players.pop_back();
  CHECK_THROWS_AS(s.validate(), validation_error);
}

TEST_CASE("nash inversion reproduces the worked example") {
  GameSpec2x2 spec = game1();
  spec.set_payoff(Slot::kRowUL, std::nullopt);
  bool degenerate = true;
  const double est = nash_inversion_2x2(spec, Slot::kRowUL, kGame1Freq, 0, 22, &degenerate);
  CHECK(!degenerate);
  CHECK(near(est, 13.705882352941176, 1e-9));
}

TEST_CASE("nash inversion recovers every slot exactly at equilibrium play") {
  const GameSpec2x2 spec = mixed_game();
  const Freq2x2 freq = product_freq(2.0 / 3.0, 3.0 / 7.0);
  for (Slot s : kAllSlots) {
    CAPTURE(slot_name(s));
    GameSpec2x2 w = spec;
    w.set_payoff(s, std::nullopt);
    const double est = nash_inversion_2x2(w, s, freq, 0, 10);
    CHECK(near(est, *spec.payoff(s), 1e-9));
  }
}

TEST_CASE("nash inversion: vanishing coefficient reports the midpoint") {
  GameSpec2x2 spec = mixed_game();
  spec.set_payoff(Slot::kRowUR, std::nullopt);
  // q = 1: the UR payoff never matters.
  const Freq2x2 all_left{0.5, 0.0, 0.5, 0.0, 10};
  bool degenerate = false;
  const double est = nash_inversion_2x2(spec, Slot::kRowUR, all_left, 0, 22, &degenerate);
  CHECK(degenerate);
  CHECK(est == 11.0);
}

TEST_CASE("nash inversion clips to the range") {
  GameSpec2x2 spec = game1();
  spec.set_payoff(Slot::kRowUL, std::nullopt);
  const double est = nash_inversion_2x2(spec, Slot::kRowUL, kGame1Freq, 0, 12);
  CHECK(est == 12.0);
}

TEST_CASE("session-level estimates reproduce the worked example numbers") {
  const Session2x2 s = uniform_session(kGame1Freq);
  const GameSpec2x2 spec = game1();

  const ValueGrid wide = make_uniform_grid(0, 100, 1);
  const auto qr = estimate_session(s, spec, AggregationLevel::kSession, Method::kQr, wide, 3.0);
  REQUIRE(qr.size() == 8);
  CHECK(qr[0].slot == Slot::kRowUL);
  CHECK(near(qr[0].estimate, 10.153235617110369, 1e-6));
  CHECK(qr[0].true_value == 10.0);

  const ValueGrid grid = make_uniform_grid(0, 22, 1);
  const auto mr = estimate_session(s, spec, AggregationLevel::kSession, Method::kMr, grid, 3.0);
  CHECK(mr[0].estimate == 13.0);

  const auto eq = estimate_session(s, spec, AggregationLevel::kSession, Method::kEq, grid, 3.0);
  CHECK(near(eq[0].estimate, 13.705882352941176, 1e-9));
}

TEST_CASE("player level with identical players equals session level") {
  const Session2x2 s = uniform_session(kGame1Freq);
  const GameSpec2x2 spec = game1();
  const ValueGrid grid = make_uniform_grid(0, 22, 1);

  const auto session = estimate_session(s, spec, AggregationLevel::kSession, Method::kQr, grid, 3.0);
  const auto player = estimate_session(s, spec, AggregationLevel::kPlayer, Method::kQr, grid, 3.0);
  REQUIRE(player.size() == 32);  // 8 players x their own 4 slots
  for (const SlotEstimate& pe : player) {
    const auto it = std::find_if(session.begin(), session.end(),
                                 [&](const SlotEstimate& se) { return se.slot == pe.slot; });
    REQUIRE(it != session.end());
    CHECK(near(pe.estimate, it->estimate, 1e-12));
  }
}

TEST_CASE("fine-grained with identical curves equals session QR at 3x lambda") {
  const Session2x2 s = uniform_session(kGame1Freq);
  const GameSpec2x2 spec = game1();
  const ValueGrid grid = make_uniform_grid(0, 22, 1);
  const double lambda = 2.0;

  // 4 identical curves at (3/4) lambda sum to one curve at 3 lambda.
  const auto fine =
      estimate_session(s, spec, AggregationLevel::kFineGrained, Method::kQr, grid, lambda);
  const auto session =
      estimate_session(s, spec, AggregationLevel::kSession, Method::kQr, grid, 3.0 * lambda);
  REQUIRE(fine.size() == session.size());
  for (std::size_t i = 0; i < fine.size(); ++i)
    CHECK(near(fine[i].estimate, session[i].estimate, 1e-9));
}

TEST_CASE("role symmetry: transposing the game mirrors every estimate") {
  std::mt19937_64 gen(31415);
  std::uniform_real_distribution<double> pay(0.0, 20.0);
  std::uniform_real_distribution<double> u01(0.05, 1.0);

  for (int rep = 0; rep < 10; ++rep) {
    GameSpec2x2 spec;
    for (Slot s : kAllSlots) spec.set_payoff(s, pay(gen));
    double a = u01(gen), b = u01(gen), c = u01(gen), d = u01(gen);
    const double total = a + b + c + d;
    const Freq2x2 freq{a / total, b / total, c / total, d / total, 100};
    const Session2x2 session = uniform_session(freq);

    Session2x2 mirrored;
    mirrored.game_id = session.game_id;
    mirrored.session_id = session.session_id;
    for (const PlayerFreq& p : session.players) {
      mirrored.players.push_back(
          {p.player_id, p.role == PlayerRole::kRow ? PlayerRole::kCol : PlayerRole::kRow,
           p.freq.transposed()});
    }

    const ValueGrid grid = make_uniform_grid(0, 22, 1);
    for (Method m : {Method::kQr, Method::kMr, Method::kEq}) {
      const auto direct =
          estimate_session(session, spec, AggregationLevel::kSession, m, grid, 3.0);
      const auto flipped =
          estimate_session(mirrored, spec.transposed(), AggregationLevel::kSession, m, grid, 3.0);
      for (const SlotEstimate& e : direct) {
        const Slot want = transposed_slot(e.slot);
        const auto it = std::find_if(flipped.begin(), flipped.end(),
                                     [&](const SlotEstimate& f) { return f.slot == want; });
        REQUIRE(it != flipped.end());
        CHECK(near(e.estimate, it->estimate, 1e-12));
      }
    }
  }
}

TEST_CASE("all estimates stay inside the configured range") {
  std::mt19937_64 gen(999);
  std::uniform_real_distribution<double> pay(0.0, 30.0);
  std::uniform_real_distribution<double> u01(0.01, 1.0);
  const ValueGrid grid = make_uniform_grid(0, 22, 1);

  for (int rep = 0; rep < 20; ++rep) {
    GameSpec2x2 spec;
    for (Slot s : kAllSlots) spec.set_payoff(s, pay(gen));
    double a = u01(gen), b = u01(gen), c = u01(gen), d = u01(gen);
    const double total = a + b + c + d;
    const Session2x2 session =
        uniform_session({a / total, b / total, c / total, d / total, 100});
    for (Method m : {Method::kQr, Method::kMr, Method::kMrRel, Method::kEq}) {
      for (const SlotEstimate& e :
           estimate_session(session, spec, AggregationLevel::kSession, m, grid, 3.0)) {
        CHECK(e.estimate >= 0.0);
        CHECK(e.estimate <= 22.0);
      }
    }
  }
}

TEST_CASE("fine-grid min regret agrees with the inversion at interior points") {
  const GameSpec2x2 spec = mixed_game();
  // Slightly off-equilibrium play keeps the crossing interior.
  const Freq2x2 freq = product_freq(0.6, 0.45);
  const Session2x2 session = uniform_session(freq);
  const ValueGrid fine = make_uniform_grid(0, 10, 0.001);
  const ValueGrid coarse = make_uniform_grid(0, 10, 1);

  const auto mr =
      estimate_session(session, spec, AggregationLevel::kSession, Method::kMr, fine, 3.0);
  const auto eq =
      estimate_session(session, spec, AggregationLevel::kSession, Method::kEq, coarse, 3.0);
  for (std::size_t i = 0; i < mr.size(); ++i) {
    if (eq[i].estimate <= 0.0 || eq[i].estimate >= 10.0) continue;  // boundary case
    CHECK(near(mr[i].estimate, eq[i].estimate, 1e-3));
  }
}

TEST_CASE("constant-sum session: four row estimates on [0, C]") {
  const GameSpec2x2 spec = game1();
  const Session2x2 session = uniform_session(kGame1Freq);
  const ValueGrid grid = make_uniform_grid(0, 18, 1);

  for (Method m : {Method::kQr, Method::kMr, Method::kMrRel, Method::kEq}) {
    const auto estimates =
        estimate_session(session, spec, AggregationLevel::kConstantSumSession, m, grid, 3.0);
    REQUIRE(estimates.size() == 4);
    for (const SlotEstimate& e : estimates) {
      CHECK(slot_role(e.slot) == PlayerRole::kRow);
      CHECK(e.estimate >= 0.0);
      CHECK(e.estimate <= 18.0);
      REQUIRE(e.true_value.has_value());
    }
  }
}

TEST_CASE("constant-sum estimation is exact at equilibrium play") {
  // Row payoffs (6,1,2,4) with C = 8; the column side is C - row.
  GameSpec2x2 spec;
  spec.row_payoffs = {6.0, 1.0, 2.0, 4.0};
  spec.col_payoffs = {2.0, 7.0, 6.0, 4.0};
  spec.constant_sum = 8.0;
  spec.validate();
  // Row indifference: q = 3/7. Column indifference: 2p + 6(1-p) = 7p + 4(1-p)
  // gives p = 2/7.
  const Freq2x2 freq = product_freq(2.0 / 7.0, 3.0 / 7.0);
  const Session2x2 session = uniform_session(freq);
  const ValueGrid grid = make_uniform_grid(0, 8, 1);

  const auto mr = estimate_session(session, spec, AggregationLevel::kConstantSumSession,
                                   Method::kMr, grid, 3.0);
  const auto eq = estimate_session(session, spec, AggregationLevel::kConstantSumSession,
                                   Method::kEq, grid, 3.0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(near(mr[i].estimate, *mr[i].true_value, 1e-9));
    CHECK(near(eq[i].estimate, *eq[i].true_value, 1e-9));
  }
}

TEST_CASE("constant-sum level rejects games without the constant") {
  const GameSpec2x2 spec = mixed_game();
  const Session2x2 session = uniform_session(product_freq(0.5, 0.5));
  const ValueGrid grid = make_uniform_grid(0, 8, 1);
  CHECK_THROWS_AS(estimate_session(session, spec, AggregationLevel::kConstantSumSession,
                                   Method::kMr, grid, 3.0),
                  task_error);
}

TEST_CASE("hidden slots in the spec restrict the targets") {
  GameSpec2x2 spec = game1();
  spec.set_payoff(Slot::kRowUL, std::nullopt);
  const Session2x2 session = uniform_session(kGame1Freq);
  const ValueGrid grid = make_uniform_grid(0, 22, 1);

  const auto estimates =
      estimate_session(session, spec, AggregationLevel::kSession, Method::kMr, grid, 3.0);
  REQUIRE(estimates.size() == 1);
  CHECK(estimates[0].slot == Slot::kRowUL);
  CHECK(!estimates[0].true_value.has_value());
  CHECK(estimates[0].estimate == 13.0);
}

TEST_CASE("estimate_game pools session tables") {
  const GameSpec2x2 spec = game1();
  std::vector<Session2x2> sessions = {uniform_session(kGame1Freq, "game1", "s1"),
                                      uniform_session(kGame1Freq, "game1", "s2")};
  const ValueGrid grid = make_uniform_grid(0, 22, 1);
  const auto pooled = estimate_game(sessions, spec, Method::kMr, grid, 3.0);
  REQUIRE(pooled.size() == 8);
  CHECK(pooled[0].estimate == 13.0);
  CHECK(pooled[0].scope == "game");

  sessions[1].game_id = "other";
  CHECK_THROWS_AS(estimate_game(sessions, spec, Method::kMr, grid, 3.0), validation_error);
}

TEST_CASE("session pipeline matches an independently computed golden case") {
  // Eight distinct player tables; expected values computed with a separate
  // implementation of the curve, estimator, and inversion formulas.
  const double t[8][4] = {
      {0.20165887445998967, 0.20960061180923742, 0.36043538420731297, 0.22830512952346},
      {0.22297006503626546, 0.19176235820541213, 0.32923344107236163, 0.2560341356859608},
      {0.20674820119081944, 0.2069450014249289, 0.36956135719328465, 0.21674544019096698},
      {0.14013222245302243, 0.2132134312055043, 0.34295286214971177, 0.3037014841917616},
      {0.18217818953702541, 0.20384871167705534, 0.35675997100007345, 0.2572131277858459},
      {0.1607354710819287, 0.24723684145385216, 0.32878507425794873, 0.26324261320627046},
      {0.13456316171020502, 0.2626923868716825, 0.3656582136159712, 0.23708623780214133},
      {0.15335218565058387, 0.24813608587926803, 0.3149096419559905, 0.2836020865141576},
  };
  Session2x2 session;
  session.game_id = "golden";
  session.session_id = "s1";
  for (int i = 0; i < 8; ++i) {
    session.players.push_back({"p" + std::to_string(i),
                               i < 4 ? PlayerRole::kRow : PlayerRole::kCol,
                               Freq2x2{t[i][0], t[i][1], t[i][2], t[i][3], 200}});
  }
  GameSpec2x2 spec;
  spec.row_payoffs = {14.0, 3.0, 6.0, 11.0};
  spec.col_payoffs = {5.0, 16.0, 12.0, 7.0};

  struct Expected {
    const char* slot;
    double qr, mr, eq;
  };
  const Expected expected[] = {
      {"row_UL", 12.39320617689763, 13, 13.345387569868842},
      {"row_UR", 2.455946332908396, 2, 2.287049268505411},
      {"row_DL", 7.61240626575498, 7, 6.654612430131159},
      {"row_DR", 11.909768665308775, 12, 11.712950731494592},
      {"col_UL", 7.973671167085294, 7, 8.44418074992174},
      {"col_UR", 13.055205311780472, 11, 12.555819250078256},
      {"col_DL", 14.798363071469959, 13, 14.279157716673854},
      {"col_DR", 4.317312299087571, 3, 4.720842283326147},
  };

  const ValueGrid grid = make_uniform_grid(0, 22, 1);
  const auto qr = estimate_session(session, spec, AggregationLevel::kSession, Method::kQr,
                                   grid, 3.0);
  const auto mr = estimate_session(session, spec, AggregationLevel::kSession, Method::kMr,
                                   grid, 3.0);
  const auto eq = estimate_session(session, spec, AggregationLevel::kSession, Method::kEq,
                                   grid, 3.0);
  REQUIRE(qr.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CAPTURE(expected[i].slot);
    CHECK(slot_name(qr[i].slot) == expected[i].slot);
    CHECK(near(qr[i].estimate, expected[i].qr, 1e-9));
    CHECK(near(mr[i].estimate, expected[i].mr, 1e-9));
    CHECK(near(eq[i].estimate, expected[i].eq, 1e-9));
  }
}

TEST_CASE("noisy learner sessions: quantal regret beats the point estimators") {
  // Fully deterministic given the pinned seeds: 3 games x 6 sessions of
  // exponential-weights players, session-level estimation of all 8 slots.
  GameSpec2x2 games[3];
  games[0].row_payoffs = {10.0, 0.0, 9.0, 10.0};
  games[0].col_payoffs = {8.0, 18.0, 9.0, 8.0};
  games[1].row_payoffs = {14.0, 3.0, 6.0, 11.0};
  games[1].col_payoffs = {5.0, 16.0, 12.0, 7.0};
  games[2].row_payoffs = {6.0, 12.0, 13.0, 5.0};
  games[2].col_payoffs = {9.0, 4.0, 2.0, 12.0};

  const ValueGrid grid = make_uniform_grid(0, 22, 1);
  std::map<Method, std::vector<double>> squared;
  for (int g = 0; g < 3; ++g) {
    for (std::uint64_t s = 1; s <= 6; ++s) {
      std::vector<AgentSpec> agents(8);
      for (int i = 0; i < 8; ++i) {
        agents[i].id = "a" + std::to_string(i + 1);
        agents[i].kind = AgentKind::kExpWeights;
        agents[i].learning_rate = 0.03;
        agents[i].seed = static_cast<std::uint64_t>(i);
      }
      const Session2x2 session = simulate_session2x2(
          agents, games[g], 200, 1000 * (g + 1) + s, "g" + std::to_string(g), "s");
      for (Method m : {Method::kQr, Method::kMr, Method::kEq}) {
        for (const auto& e :
             estimate_session(session, games[g], AggregationLevel::kSession, m, grid, 3.0)) {
          const double err = e.estimate - *e.true_value;
          squared[m].push_back(err * err);
        }
      }
    }
  }
  auto rmse = [&](Method m) {
    double total = 0.0;
    for (double x : squared[m]) total += x;
    return std::sqrt(total / static_cast<double>(squared[m].size()));
  };
  REQUIRE(squared[Method::kQr].size() == 144);
  CHECK(rmse(Method::kQr) < rmse(Method::kMr));
  CHECK(rmse(Method::kQr) < rmse(Method::kEq));
  CHECK(rmse(Method::kQr) < 2.5);
}
