#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qregret/matrix2x2.hpp"
#include "qregret/regret.hpp"
#include "qregret/report.hpp"
#include "qregret/synth.hpp"
#include "qregret/types.hpp"

namespace qregret {

// ---- frequency tables: session_id,player_id,role,f_UL,f_UR,f_DL,f_DR,periods

struct FreqRecord {
  std::string session_id;
  std::string player_id;
  PlayerRole role = PlayerRole::kRow;
  Freq2x2 freq;
};

std::vector<FreqRecord> read_freq_csv(std::istream& in);
std::vector<FreqRecord> read_freq_csv_file(const std::string& path);
void write_freq_csv(std::ostream& out, std::span<const FreqRecord> records);
void write_freq_csv_file(const std::string& path, std::span<const FreqRecord> records);

// Groups records into sessions (ordered by session id) under one game id.
std::vector<Session2x2> sessions_from_records(std::span<const FreqRecord> records,
                                              const std::string& game_id);

std::vector<FreqRecord> records_from_session(const Session2x2& session);

// ---- bid logs: round,player_id,bid (rounds 1..T contiguous)

BidLog read_bidlog_csv(std::istream& in);
BidLog read_bidlog_csv_file(const std::string& path);
void write_bidlog_csv(std::ostream& out, const BidLog& log);
void write_bidlog_csv_file(const std::string& path, const BidLog& log);

// ---- game and auction specs (JSON)

GameSpec2x2 game_from_json(const nlohmann::json& j);
nlohmann::json game_to_json(const GameSpec2x2& spec);
// File of GameSpec2x2 records keyed by game id.
std::map<std::string, GameSpec2x2> read_games_json_file(const std::string& path);

AuctionSpec auction_from_json(const nlohmann::json& j);
nlohmann::json auction_to_json(const AuctionSpec& spec);
AuctionSpec read_auction_json_file(const std::string& path);

// ---- simulation scenarios (JSON)

struct Scenario {
  enum class Kind { kAuction, kGame2x2, kSession2x2 };
  Kind kind = Kind::kAuction;
  std::vector<AgentSpec> agents;
  AuctionSpec auction;  // kAuction only
  GameSpec2x2 game;     // 2x2 kinds only
  BidGridSpec bid_grid;
  int rounds = 1;
  std::uint64_t seed = 0;
  std::string game_id = "game";
  std::string session_id = "s1";
};

Scenario scenario_from_json(const nlohmann::json& j);
Scenario read_scenario_file(const std::string& path);

// ---- ground truth for auction players: player_id,true_value

std::map<std::string, double> read_truth_csv(std::istream& in);
std::map<std::string, double> read_truth_csv_file(const std::string& path);
void write_truth_csv_file(const std::string& path,
                          const std::map<std::string, double>& truth);

// ---- outputs

// player_id,theta,regret
void write_regret_curves_csv(std::ostream& out, std::span<const RegretCurve> curves);

struct Estimate2x2Row {
  std::string game_id;
  std::string session_id;
  std::string level;
  std::string method;
  std::string slot;
  std::string scope;
  double estimate = 0.0;
  std::optional<double> true_value;
};

// game_id,session_id,level,method,slot,estimate,true_value,error
void write_estimates_2x2_csv(std::ostream& out, std::span<const Estimate2x2Row> rows);

struct EstimateAuctionRow {
  std::string session_id;
  std::string player_id;
  std::string method;
  double estimate = 0.0;
  std::optional<double> true_value;
};

// session_id,player_id,method,estimate,true_value,error
void write_estimates_auction_csv(std::ostream& out, std::span<const EstimateAuctionRow> rows);

struct MethodReport {
  std::string method;
  ErrorReport report;
};

// Table-shaped report: rows {rmse, avg_error, hit_rate} x method columns.
void write_report_csv(std::ostream& out, std::span<const MethodReport> reports);
nlohmann::json report_to_json(std::span<const MethodReport> reports);

void write_lambda_sweep_csv(std::ostream& out, const LambdaSweepResult& sweep);
void write_range_sweep_csv(std::ostream& out, std::span<const RangeSweepRow> rows);

// ---- small file helpers

void write_text_file(const std::string& path, const std::string& text);

}  // namespace qregret
