#include <doctest.h>

#include <random>
#include <sstream>

#include "qregret/io.hpp"
#include "test_util.hpp"

using namespace qregret;

TEST_CASE("freq csv round trip preserves every value exactly") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<FreqRecord> records;
  for (int i = 0; i < 16; ++i) {
    double a = u01(gen), b = u01(gen), c = u01(gen), d = u01(gen);
    const double total = a + b + c + d;
    Freq2x2 f{a / total, b / total, c / total, d / total, 200};
    // Renormalize the last entry so the sum is exactly 1 in double arithmetic.
    f.f_dr = 1.0 - f.f_ul - f.f_ur - f.f_dl;
    records.push_back({"s" + std::to_string(i / 8 + 1), "p" + std::to_string(i % 8 + 1),
                       i % 2 ? PlayerRole::kCol : PlayerRole::kRow, f});
  }

  std::stringstream ss;
  write_freq_csv(ss, records);
  const auto parsed = read_freq_csv(ss);
  REQUIRE(parsed.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(parsed[i].session_id == records[i].session_id);
    CHECK(parsed[i].player_id == records[i].player_id);
    CHECK(parsed[i].role == records[i].role);
    CHECK(parsed[i].freq.f_ul == records[i].freq.f_ul);
    CHECK(parsed[i].freq.f_ur == records[i].freq.f_ur);
    CHECK(parsed[i].freq.f_dl == records[i].freq.f_dl);
    CHECK(parsed[i].freq.f_dr == records[i].freq.f_dr);
    CHECK(parsed[i].freq.periods == records[i].freq.periods);
  }
}

TEST_CASE("freq csv rejects malformed input") {
  std::stringstream bad_header("a,b\n");
  CHECK_THROWS_AS(read_freq_csv(bad_header), validation_error);

  std::stringstream bad_row(
      "session_id,player_id,role,f_UL,f_UR,f_DL,f_DR,periods\n"
      "s1,p1,row,0.5,0.5,0.5,-0.5,10\n");
  CHECK_THROWS_AS(read_freq_csv(bad_row), validation_error);
}

TEST_CASE("bid log csv round trip") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> bid(0.0, 60.0);
  BidLog log;
  log.player_ids = {"p1", "p2", "p3"};
  for (int t = 0; t < 12; ++t) log.rounds.push_back({bid(gen), bid(gen), bid(gen)});

  std::stringstream ss;
  write_bidlog_csv(ss, log);
  const BidLog parsed = read_bidlog_csv(ss);
  CHECK(parsed.player_ids == log.player_ids);
  CHECK(parsed.rounds == log.rounds);
}

TEST_CASE("bid log csv validates contiguity and duplicates") {
  std::stringstream missing(
      "round,player_id,bid\n"
      "1,p1,5\n1,p2,3\n3,p1,5\n3,p2,3\n");
  CHECK_THROWS_AS(read_bidlog_csv(missing), validation_error);

  std::stringstream dup(
      "round,player_id,bid\n"
      "1,p1,5\n1,p1,3\n");
  CHECK_THROWS_AS(read_bidlog_csv(dup), validation_error);

  std::stringstream ragged(
      "round,player_id,bid\n"
      "1,p1,5\n1,p2,3\n2,p1,5\n");
  CHECK_THROWS_AS(read_bidlog_csv(ragged), validation_error);
}

TEST_CASE("game json round trip with hidden slots and constant sum") {
  GameSpec2x2 spec;
  spec.row_payoffs = {10.0, std::nullopt, 9.0, 10.0};
  spec.col_payoffs = {8.0, 18.0, 9.0, 8.0};
  spec.constant_sum = 18.0;

  const nlohmann::json j = game_to_json(spec);
  CHECK(j["row_payoffs"]["UR"] == "hidden");
  const GameSpec2x2 parsed = game_from_json(j);
  for (Slot s : kAllSlots) CHECK(parsed.payoff(s) == spec.payoff(s));
  CHECK(parsed.constant_sum == spec.constant_sum);

  nlohmann::json bad = j;
  bad["row_payoffs"].erase("UL");
  CHECK_THROWS_AS(game_from_json(bad), validation_error);
}

TEST_CASE("auction json round trip") {
  AuctionSpec spec{Mechanism::kVcg, {0.38, 0.29, 0.20, 0.11, 0.02}, 5, TieRule::kHighestIdWins};
  const AuctionSpec parsed = auction_from_json(auction_to_json(spec));
  CHECK(parsed.mechanism == spec.mechanism);
  CHECK(parsed.ctrs == spec.ctrs);
  CHECK(parsed.n_players == spec.n_players);
  CHECK(parsed.tie_rule == spec.tie_rule);

  nlohmann::json j = auction_to_json(spec);
  j["ctrs"] = {0.2, 0.3};  // ascending
  CHECK_THROWS_AS(auction_from_json(j), validation_error);
}

TEST_CASE("scenario parsing") {
  nlohmann::json j;
  j["kind"] = "auction";
  j["auction"] = {{"mechanism", "GSP"},
                  {"ctrs", {0.38, 0.29, 0.20, 0.11, 0.02}},
                  {"n_players", 5}};
  j["rounds"] = 100;
  j["seed"] = 7;
  j["agents"] = nlohmann::json::array();
  for (int i = 0; i < 5; ++i)
    j["agents"].push_back({{"id", "p" + std::to_string(i + 1)},
                           {"kind", "TRUTHFUL"},
                           {"true_value", 21 + 6 * i}});
  const Scenario sc = scenario_from_json(j);
  CHECK(sc.kind == Scenario::Kind::kAuction);
  CHECK(sc.agents.size() == 5);
  CHECK(sc.agents[4].true_value == 45.0);

  j["agents"].erase(4);
  CHECK_THROWS_AS(scenario_from_json(j), validation_error);
}

TEST_CASE("truth csv round trip through a temp file") {
  const std::map<std::string, double> truth = {{"p1", 21}, {"p2", 27.5}};
  const std::string path = "truth_roundtrip_test.csv";
  write_truth_csv_file(path, truth);
  CHECK(read_truth_csv_file(path) == truth);
  std::remove(path.c_str());
}

TEST_CASE("report csv has the table shape") {
  ErrorReport r;
  r.rmse = 2.29;
  r.avg_error = 2.04;
  r.hit_rate = 0.816;
  std::vector<MethodReport> reports = {{"eq", r}, {"mr", r}, {"qr", r}};
  std::stringstream ss;
  write_report_csv(ss, reports);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "metric,eq,mr,qr");
  std::getline(ss, line);
  CHECK(line.rfind("rmse,", 0) == 0);
  std::getline(ss, line);
  CHECK(line.rfind("avg_error,", 0) == 0);
  std::getline(ss, line);
  CHECK(line.rfind("hit_rate,", 0) == 0);
}

TEST_CASE("curve csv export") {
  RegretCurve c;
  c.grid = make_uniform_grid(0, 2, 1);
  c.regrets = {0.5, 0.0, 1.25};
  c.player_id = "row";
  std::stringstream ss;
  write_regret_curves_csv(ss, std::vector<RegretCurve>{c});
  CHECK(ss.str() ==
        "player_id,theta,regret\n"
        "row,0,0.5\n"
        "row,1,0\n"
        "row,2,1.25\n");
}

TEST_CASE("writers are deterministic") {
  BidLog log;
  log.player_ids = {"p1", "p2"};
  log.rounds = {{1.5, 2.25}, {3.125, 0}};
  std::stringstream a, b;
  write_bidlog_csv(a, log);
  write_bidlog_csv(b, log);
  CHECK(a.str() == b.str());
}

TEST_CASE("readers reject malformed input with errors, never crashes") {
  const char* bid_cases[] = {
      "",
      "round,player_id\n",
      "round,player_id,bid\nx,p1,5\n",
      "round,player_id,bid\n0,p1,5\n",
      "round,player_id,bid\n1,p1,-3\n",
      "round,player_id,bid\n1,p1,nope\n",
      "round,player_id,bid\n1,p1,5,extra\n",
  };
  for (const char* text : bid_cases) {
    CAPTURE(text);
    std::stringstream ss(text);
    CHECK_THROWS_AS(read_bidlog_csv(ss), validation_error);
  }

  const char* freq_cases[] = {
      "",
      "session_id,player_id,role,f_UL,f_UR,f_DL,f_DR,periods\ns,p,middle,0.25,0.25,0.25,0.25,10\n",
      "session_id,player_id,role,f_UL,f_UR,f_DL,f_DR,periods\ns,p,row,0.5,0.5,0.25,0.25,10\n",
      "session_id,player_id,role,f_UL,f_UR,f_DL,f_DR,periods\ns,p,row,a,b,c,d,10\n",
  };
  for (const char* text : freq_cases) {
    CAPTURE(text);
    std::stringstream ss(text);
    CHECK_THROWS_AS(read_freq_csv(ss), validation_error);
  }

  CHECK_THROWS_AS(game_from_json(nlohmann::json::parse("[1,2]")), validation_error);
  CHECK_THROWS_AS(auction_from_json(nlohmann::json::parse("{\"mechanism\":\"GSP\"}")),
                  validation_error);
  CHECK_THROWS_AS(scenario_from_json(nlohmann::json::parse("{\"kind\":\"poker\"}")),
                  validation_error);
}
