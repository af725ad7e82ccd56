#include "qregret/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace qregret {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

void expect_header(const std::string& got, const std::string& want, const std::string& what) {
  std::string trimmed = got;
  while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == '\n'))
    trimmed.pop_back();
  if (trimmed != want)
    throw validation_error(what + ": expected header '" + want + "', got '" + trimmed + "'");
}

std::ifstream open_input(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw validation_error(what + ": cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path, const std::string& what) {
  std::ofstream out(path);
  if (!out) throw validation_error(what + ": cannot write '" + path + "'");
  return out;
}

void check_csv_safe(const std::string& id, const std::string& what) {
  if (id.find(',') != std::string::npos || id.find('\n') != std::string::npos)
    throw validation_error(what + ": id '" + id + "' contains a delimiter");
}

double json_number(const nlohmann::json& j, const std::string& what) {
  if (!j.is_number()) throw validation_error(what + ": expected a number");
  return j.get<double>();
}

}  // namespace

constexpr const char* kFreqHeader = "session_id,player_id,role,f_UL,f_UR,f_DL,f_DR,periods";

std::vector<FreqRecord> read_freq_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw validation_error("freq csv: empty file");
  expect_header(line, kFreqHeader, "freq csv");

  std::vector<FreqRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 8)
      throw validation_error("freq csv line " + std::to_string(lineno) + ": expected 8 fields");
    FreqRecord rec;
    rec.session_id = fields[0];
    rec.player_id = fields[1];
    rec.role = role_from_name(fields[2]);
    rec.freq.f_ul = parse_double(fields[3], "freq csv f_UL");
    rec.freq.f_ur = parse_double(fields[4], "freq csv f_UR");
    rec.freq.f_dl = parse_double(fields[5], "freq csv f_DL");
    rec.freq.f_dr = parse_double(fields[6], "freq csv f_DR");
    rec.freq.periods = static_cast<int>(parse_int(fields[7], "freq csv periods"));
    validate_freq(rec.freq);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<FreqRecord> read_freq_csv_file(const std::string& path) {
  auto in = open_input(path, "freq csv");
  return read_freq_csv(in);
}

void write_freq_csv(std::ostream& out, std::span<const FreqRecord> records) {
  out << kFreqHeader << "\n";
  for (const FreqRecord& r : records) {
    check_csv_safe(r.session_id, "freq csv");
    check_csv_safe(r.player_id, "freq csv");
    out << r.session_id << ',' << r.player_id << ',' << role_name(r.role) << ','
        << format_double(r.freq.f_ul) << ',' << format_double(r.freq.f_ur) << ','
        << format_double(r.freq.f_dl) << ',' << format_double(r.freq.f_dr) << ','
        << r.freq.periods << "\n";
  }
}

void write_freq_csv_file(const std::string& path, std::span<const FreqRecord> records) {
  auto out = open_output(path, "freq csv");
  write_freq_csv(out, records);
}

std::vector<Session2x2> sessions_from_records(std::span<const FreqRecord> records,
                                              const std::string& game_id) {
  std::map<std::string, Session2x2> by_session;
  for (const FreqRecord& r : records) {
    Session2x2& s = by_session[r.session_id];
    s.game_id = game_id;
    s.session_id = r.session_id;
    s.players.push_back({r.player_id, r.role, r.freq});
  }
  std::vector<Session2x2> sessions;
  sessions.reserve(by_session.size());
  for (auto& [id, s] : by_session) {
    s.validate();
    sessions.push_back(std::move(s));
  }
  return sessions;
}

std::vector<FreqRecord> records_from_session(const Session2x2& session) {
  std::vector<FreqRecord> records;
  records.reserve(session.players.size());
  for (const PlayerFreq& p : session.players)
    records.push_back({session.session_id, p.player_id, p.role, p.freq});
  return records;
}

constexpr const char* kBidHeader = "round,player_id,bid";

BidLog read_bidlog_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw validation_error("bid csv: empty file");
  expect_header(line, kBidHeader, "bid csv");

  std::map<long long, std::map<std::string, double>> by_round;
  std::set<std::string> ids;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw validation_error("bid csv line " + std::to_string(lineno) + ": expected 3 fields");
    const long long round = parse_int(fields[0], "bid csv round");
    const double bid = parse_double(fields[2], "bid csv bid");
    if (round < 1) throw validation_error("bid csv: rounds are numbered from 1");
    auto [it, inserted] = by_round[round].emplace(fields[1], bid);
    if (!inserted)
      throw validation_error("bid csv: duplicate entry for round " + fields[0] +
                             ", player '" + fields[1] + "'");
    ids.insert(fields[1]);
  }
  if (by_round.empty()) throw validation_error("bid csv: no rounds");

  const long long last = by_round.rbegin()->first;
  if (static_cast<long long>(by_round.size()) != last)
    throw validation_error("bid csv: rounds must be contiguous 1..T");

  BidLog log;
  log.player_ids.assign(ids.begin(), ids.end());
  log.rounds.reserve(by_round.size());
  for (long long t = 1; t <= last; ++t) {
    const auto& row = by_round[t];
    if (row.size() != ids.size())
      throw validation_error("bid csv: round " + std::to_string(t) + " has " +
                             std::to_string(row.size()) + " bids, expected " +
                             std::to_string(ids.size()));
    std::vector<double> bids;
    bids.reserve(ids.size());
    for (const std::string& id : log.player_ids) bids.push_back(row.at(id));
    log.rounds.push_back(std::move(bids));
  }
  log.validate();
  return log;
}

BidLog read_bidlog_csv_file(const std::string& path) {
  auto in = open_input(path, "bid csv");
  return read_bidlog_csv(in);
}

void write_bidlog_csv(std::ostream& out, const BidLog& log) {
  log.validate();
  out << kBidHeader << "\n";
  for (int t = 0; t < log.num_rounds(); ++t) {
    for (int p = 0; p < log.num_players(); ++p) {
      check_csv_safe(log.player_ids[static_cast<std::size_t>(p)], "bid csv");
      out << (t + 1) << ',' << log.player_ids[static_cast<std::size_t>(p)] << ','
          << format_double(log.rounds[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)])
          << "\n";
    }
  }
}

void write_bidlog_csv_file(const std::string& path, const BidLog& log) {
  auto out = open_output(path, "bid csv");
  write_bidlog_csv(out, log);
}

namespace {

constexpr std::array<const char*, 4> kCellNames = {"UL", "UR", "DL", "DR"};

std::array<std::optional<double>, 4> payoffs_from_json(const nlohmann::json& j,
                                                       const std::string& what) {
  if (!j.is_object()) throw validation_error(what + ": expected an object of UL/UR/DL/DR");
  std::array<std::optional<double>, 4> out;
  for (std::size_t c = 0; c < 4; ++c) {
    if (!j.contains(kCellNames[c]))
      throw validation_error(what + ": missing cell " + kCellNames[c]);
    const auto& v = j.at(kCellNames[c]);
    if (v.is_string()) {
      if (v.get<std::string>() != "hidden")
        throw validation_error(what + ": cell " + kCellNames[c] +
                               " must be a number or \"hidden\"");
      out[c] = std::nullopt;
    } else {
      out[c] = json_number(v, what + " " + kCellNames[c]);
    }
  }
  return out;
}

nlohmann::json payoffs_to_json(const std::array<std::optional<double>, 4>& payoffs) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t c = 0; c < 4; ++c) {
    if (payoffs[c])
      j[kCellNames[c]] = *payoffs[c];
    else
      j[kCellNames[c]] = "hidden";
  }
  return j;
}

}  // namespace

GameSpec2x2 game_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw validation_error("game json: expected an object");
  if (!j.contains("row_payoffs") || !j.contains("col_payoffs"))
    throw validation_error("game json: need row_payoffs and col_payoffs");
  GameSpec2x2 spec;
  spec.row_payoffs = payoffs_from_json(j.at("row_payoffs"), "game json row_payoffs");
  spec.col_payoffs = payoffs_from_json(j.at("col_payoffs"), "game json col_payoffs");
  if (j.contains("constant_sum"))
    spec.constant_sum = json_number(j.at("constant_sum"), "game json constant_sum");
  spec.validate();
  return spec;
}

nlohmann::json game_to_json(const GameSpec2x2& spec) {
  nlohmann::json j;
  j["row_payoffs"] = payoffs_to_json(spec.row_payoffs);
  j["col_payoffs"] = payoffs_to_json(spec.col_payoffs);
  if (spec.constant_sum) j["constant_sum"] = *spec.constant_sum;
  return j;
}

std::map<std::string, GameSpec2x2> read_games_json_file(const std::string& path) {
  auto in = open_input(path, "games json");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("games json: parse error in '" + path + "': " + e.what());
  }
  if (!j.is_object() || j.empty())
    throw validation_error("games json: expected a non-empty object keyed by game id");
  std::map<std::string, GameSpec2x2> games;
  for (const auto& [id, game] : j.items()) games.emplace(id, game_from_json(game));
  return games;
}

AuctionSpec auction_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw validation_error("auction json: expected an object");
  AuctionSpec spec;
  if (!j.contains("mechanism") || !j.contains("ctrs") || !j.contains("n_players"))
    throw validation_error("auction json: need mechanism, ctrs, n_players");
  spec.mechanism = mechanism_from_name(j.at("mechanism").get<std::string>());
  if (!j.at("ctrs").is_array()) throw validation_error("auction json: ctrs must be an array");
  for (const auto& c : j.at("ctrs")) spec.ctrs.push_back(json_number(c, "auction json ctr"));
  spec.n_players = static_cast<int>(json_number(j.at("n_players"), "auction json n_players"));
  if (j.contains("tie_rule"))
    spec.tie_rule = tie_rule_from_name(j.at("tie_rule").get<std::string>());
  spec.validate();
  return spec;
}

nlohmann::json auction_to_json(const AuctionSpec& spec) {
  nlohmann::json j;
  j["mechanism"] = mechanism_name(spec.mechanism);
  j["ctrs"] = spec.ctrs;
  j["n_players"] = spec.n_players;
  j["tie_rule"] = tie_rule_name(spec.tie_rule);
  return j;
}

AuctionSpec read_auction_json_file(const std::string& path) {
  auto in = open_input(path, "auction json");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("auction json: parse error in '" + path + "': " + e.what());
  }
  return auction_from_json(j);
}

namespace {

AgentSpec agent_from_json(const nlohmann::json& j, std::size_t index) {
  if (!j.is_object()) throw validation_error("scenario: agent must be an object");
  AgentSpec agent;
  agent.id = j.value("id", "p" + std::to_string(index + 1));
  if (!j.contains("kind")) throw validation_error("scenario: agent needs a kind");
  agent.kind = agent_kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("true_value"))
    agent.true_value = json_number(j.at("true_value"), "scenario true_value");
  if (j.contains("learning_rate"))
    agent.learning_rate = json_number(j.at("learning_rate"), "scenario learning_rate");
  if (j.contains("fixed_bid"))
    agent.fixed_bid = json_number(j.at("fixed_bid"), "scenario fixed_bid");
  if (j.contains("epsilon")) agent.epsilon = json_number(j.at("epsilon"), "scenario epsilon");
  if (j.contains("seed")) agent.seed = j.at("seed").get<std::uint64_t>();
  agent.validate();
  return agent;
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw validation_error("scenario: expected an object");
  Scenario sc;
  const std::string kind = j.value("kind", "auction");
  if (kind == "auction") {
    sc.kind = Scenario::Kind::kAuction;
    if (!j.contains("auction")) throw validation_error("scenario: auction kind needs 'auction'");
    sc.auction = auction_from_json(j.at("auction"));
  } else if (kind == "game2x2" || kind == "session2x2") {
    sc.kind = kind == "game2x2" ? Scenario::Kind::kGame2x2 : Scenario::Kind::kSession2x2;
    if (!j.contains("game")) throw validation_error("scenario: 2x2 kind needs 'game'");
    sc.game = game_from_json(j.at("game"));
  } else {
    throw validation_error("scenario: unknown kind '" + kind + "'");
  }
  if (!j.contains("rounds")) throw validation_error("scenario: needs rounds");
  sc.rounds = static_cast<int>(json_number(j.at("rounds"), "scenario rounds"));
  if (sc.rounds < 1) throw validation_error("scenario: rounds must be >= 1");
  if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("bid_grid")) {
    const auto& g = j.at("bid_grid");
    sc.bid_grid.lower = json_number(g.at("lower"), "scenario bid_grid lower");
    sc.bid_grid.upper = json_number(g.at("upper"), "scenario bid_grid upper");
    sc.bid_grid.step = json_number(g.at("step"), "scenario bid_grid step");
  }
  sc.game_id = j.value("game_id", "game");
  sc.session_id = j.value("session_id", "s1");
  if (!j.contains("agents") || !j.at("agents").is_array())
    throw validation_error("scenario: needs an agents array");
  std::size_t index = 0;
  for (const auto& a : j.at("agents")) sc.agents.push_back(agent_from_json(a, index++));

  const std::size_t expected = sc.kind == Scenario::Kind::kAuction
                                   ? static_cast<std::size_t>(sc.auction.n_players)
                                   : (sc.kind == Scenario::Kind::kGame2x2 ? 2 : 8);
  if (sc.agents.size() != expected)
    throw validation_error("scenario: expected " + std::to_string(expected) + " agents, got " +
                           std::to_string(sc.agents.size()));
  return sc;
}

Scenario read_scenario_file(const std::string& path) {
  auto in = open_input(path, "scenario");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("scenario: parse error in '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

constexpr const char* kTruthHeader = "player_id,true_value";

std::map<std::string, double> read_truth_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw validation_error("truth csv: empty file");
  expect_header(line, kTruthHeader, "truth csv");
  std::map<std::string, double> truth;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2)
      throw validation_error("truth csv line " + std::to_string(lineno) + ": expected 2 fields");
    const double value = parse_double(fields[1], "truth csv value");
    if (!std::isfinite(value))
      throw validation_error("truth csv line " + std::to_string(lineno) + ": non-finite value");
    truth[fields[0]] = value;
  }
  return truth;
}

std::map<std::string, double> read_truth_csv_file(const std::string& path) {
  auto in = open_input(path, "truth csv");
  return read_truth_csv(in);
}

void write_truth_csv_file(const std::string& path,
                          const std::map<std::string, double>& truth) {
  auto out = open_output(path, "truth csv");
  out << kTruthHeader << "\n";
  for (const auto& [id, v] : truth) {
    check_csv_safe(id, "truth csv");
    out << id << ',' << format_double(v) << "\n";
  }
}

void write_regret_curves_csv(std::ostream& out, std::span<const RegretCurve> curves) {
  out << "player_id,theta,regret\n";
  for (const RegretCurve& c : curves) {
    check_csv_safe(c.player_id, "curve csv");
    for (std::size_t j = 0; j < c.grid.size(); ++j)
      out << c.player_id << ',' << format_double(c.grid.points[j]) << ','
          << format_double(c.regrets[j]) << "\n";
  }
}

void write_estimates_2x2_csv(std::ostream& out, std::span<const Estimate2x2Row> rows) {
  out << "game_id,session_id,level,method,slot,estimate,true_value,error\n";
  for (const Estimate2x2Row& r : rows) {
    out << r.game_id << ',' << r.session_id << ',' << r.level << ',' << r.method << ','
        << r.slot;
    if (!r.scope.empty() && r.scope != "session" && r.scope != "game") out << ':' << r.scope;
    out << ',' << format_double(r.estimate) << ',';
    if (r.true_value) {
      out << format_double(*r.true_value) << ','
          << format_double(std::abs(r.estimate - *r.true_value));
    } else {
      out << ',';
    }
    out << "\n";
  }
}

void write_estimates_auction_csv(std::ostream& out, std::span<const EstimateAuctionRow> rows) {
  out << "session_id,player_id,method,estimate,true_value,error\n";
  for (const EstimateAuctionRow& r : rows) {
    out << r.session_id << ',' << r.player_id << ',' << r.method << ','
        << format_double(r.estimate) << ',';
    if (r.true_value) {
      out << format_double(*r.true_value) << ','
          << format_double(std::abs(r.estimate - *r.true_value));
    } else {
      out << ',';
    }
    out << "\n";
  }
}

void write_report_csv(std::ostream& out, std::span<const MethodReport> reports) {
  out << "metric";
  for (const MethodReport& m : reports) out << ',' << m.method;
  out << "\n";
  out << "rmse";
  for (const MethodReport& m : reports) out << ',' << format_double(m.report.rmse);
  out << "\n";
  out << "avg_error";
  for (const MethodReport& m : reports) out << ',' << format_double(m.report.avg_error);
  out << "\n";
  out << "hit_rate";
  for (const MethodReport& m : reports) out << ',' << format_double(m.report.hit_rate);
  out << "\n";
}

nlohmann::json report_to_json(std::span<const MethodReport> reports) {
  nlohmann::json j;
  for (const MethodReport& m : reports) {
    nlohmann::json entry;
    entry["rmse"] = m.report.rmse;
    entry["avg_error"] = m.report.avg_error;
    entry["hit_rate"] = m.report.hit_rate;
    entry["hit_delta"] = m.report.hit_delta;
    entry["error_kind"] = m.report.relative ? "rel" : "abs";
    entry["count"] = m.report.entries.size();
    j[m.method] = std::move(entry);
  }
  return j;
}

void write_lambda_sweep_csv(std::ostream& out, const LambdaSweepResult& sweep) {
  out << "lambda,rmse\n";
  for (const LambdaSweepPoint& p : sweep.points)
    out << format_double(p.lambda) << ',' << format_double(p.rmse) << "\n";
}

void write_range_sweep_csv(std::ostream& out, std::span<const RangeSweepRow> rows) {
  out << "upper_bound,optimal_lambda,rmse\n";
  for (const RangeSweepRow& r : rows)
    out << format_double(r.upper) << ',' << format_double(r.best_lambda) << ','
        << format_double(r.rmse) << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  auto out = open_output(path, "file");
  out << text;
}

}  // namespace qregret
