// Command-line front end: ingestion, estimation, sweeps, simulation, and
// validation wired into reproducible runs. All defaults follow the pinned
// experiment configurations (2x2: range [0,22], grid 1, lambda 3, hit delta 3;
// auctions: range [1,60], grid 1, lambda 1, hit delta 6).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "qregret/auctions.hpp"
#include "qregret/estimators.hpp"
#include "qregret/io.hpp"
#include "qregret/matrix2x2.hpp"
#include "qregret/regret.hpp"
#include "qregret/report.hpp"
#include "qregret/synth.hpp"

namespace fs = std::filesystem;
using namespace qregret;

namespace {

struct RangeOpt {
  double lo = 0.0;
  double hi = 0.0;
  bool set = false;
};

RangeOpt parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw validation_error("range: expected LO:HI, got '" + text + "'");
  RangeOpt r;
  r.lo = parse_double(text.substr(0, colon), "range lower");
  r.hi = parse_double(text.substr(colon + 1), "range upper");
  if (!(r.lo < r.hi)) throw validation_error("range: lower must be below upper");
  r.set = true;
  return r;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_double(item, what));
  }
  if (out.empty()) throw validation_error(what + ": empty list");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string file_stem(const std::string& path) { return fs::path(path).stem().string(); }

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw validation_error("out: cannot create directory '" + out + "'");
}

// ---- estimate: 2x2 dataset ----

struct Cli2x2Config {
  std::vector<std::string> freq_files;
  std::vector<std::string> game_ids;
  std::string games_file;
  std::string level = "session";
  std::vector<std::string> methods = {"qr", "mr", "eq"};
  double lambda = 3.0;
  double lo = 0.0, hi = 22.0;
  double grid_step = 1.0;
  double hit_delta = 3.0;
  bool relative = false;
  bool emit_curves = true;
};

struct Dataset2x2 {
  std::map<std::string, GameSpec2x2> games;
  std::vector<Session2x2> sessions;  // game_id filled in
};

Dataset2x2 load_2x2(const Cli2x2Config& cfg) {
  Dataset2x2 data;
  data.games = read_games_json_file(cfg.games_file);
  if (cfg.freq_files.empty()) throw validation_error("estimate: need at least one --freqs file");

  std::vector<std::string> ids = cfg.game_ids;
  if (ids.empty()) {
    if (data.games.size() != 1)
      throw validation_error(
          "estimate: --game-id is required when the games file has several games");
    ids.assign(cfg.freq_files.size(), data.games.begin()->first);
  } else if (ids.size() == 1) {
    ids.assign(cfg.freq_files.size(), ids.front());
  } else if (ids.size() != cfg.freq_files.size()) {
    throw validation_error("estimate: --game-id count must match --freqs count");
  }

  for (std::size_t i = 0; i < cfg.freq_files.size(); ++i) {
    if (!data.games.count(ids[i]))
      throw validation_error("estimate: game '" + ids[i] + "' not in games file");
    const auto records = read_freq_csv_file(cfg.freq_files[i]);
    for (auto& s : sessions_from_records(records, ids[i])) data.sessions.push_back(std::move(s));
  }
  return data;
}

int cmd_estimate_2x2(const Cli2x2Config& cfg, const std::string& out_dir) {
  const Dataset2x2 data = load_2x2(cfg);
  const AggregationLevel level = aggregation_level_from_name(cfg.level);
  std::vector<Method> methods;
  for (const auto& m : cfg.methods) methods.push_back(method_from_name(m));

  std::vector<Estimate2x2Row> rows;
  std::vector<MethodReport> reports;
  std::map<std::string, std::vector<EstimatePair>> pairs_by_method;
  std::vector<RegretCurve> curves;

  auto run_block = [&](const std::string& session_label, const std::string& game_id,
                       const std::vector<SlotEstimate>& estimates, Method method) {
    for (const SlotEstimate& e : estimates) {
      Estimate2x2Row row;
      row.game_id = game_id;
      row.session_id = session_label;
      row.level = aggregation_level_name(level);
      row.method = method_name(method);
      row.slot = slot_name(e.slot);
      row.scope = e.scope;
      row.estimate = e.estimate;
      row.true_value = e.true_value;
      rows.push_back(row);
      if (e.true_value) {
        pairs_by_method[method_name(method)].push_back(
            {game_id + "/" + session_label + "/" + slot_name(e.slot) +
                 (e.scope != "session" && e.scope != "game" ? ":" + e.scope : ""),
             e.estimate, *e.true_value});
      }
      if (e.degenerate)
        std::cerr << "warning: degenerate inversion for " << slot_name(e.slot) << " in "
                  << game_id << "/" << session_label << ", reporting range midpoint\n";
    }
  };

  double grid_lo = cfg.lo, grid_hi = cfg.hi;
  for (Method method : methods) {
    if (level == AggregationLevel::kGame) {
      std::map<std::string, std::vector<Session2x2>> by_game;
      for (const Session2x2& s : data.sessions) by_game[s.game_id].push_back(s);
      for (const auto& [game_id, sessions] : by_game) {
        const GameSpec2x2& spec = data.games.at(game_id);
        const ValueGrid grid = make_uniform_grid(grid_lo, grid_hi, cfg.grid_step);
        run_block("all", game_id, estimate_game(sessions, spec, method, grid, cfg.lambda),
                  method);
      }
    } else {
      for (const Session2x2& s : data.sessions) {
        const GameSpec2x2& spec = data.games.at(s.game_id);
        double lo = grid_lo, hi = grid_hi;
        if (level == AggregationLevel::kConstantSumSession) {
          if (!spec.constant_sum)
            throw task_error("estimate: constant-sum level on game '" + s.game_id +
                             "' without constant_sum");
          lo = 0.0;
          hi = *spec.constant_sum;
        }
        const ValueGrid grid = make_uniform_grid(lo, hi, cfg.grid_step);
        run_block(s.session_id, s.game_id,
                  estimate_session(s, spec, level, method, grid, cfg.lambda), method);
      }
    }
  }

  // Session-table regret curves for the first game, one per slot (plot data).
  if (cfg.emit_curves && !data.sessions.empty()) {
    const Session2x2& s = data.sessions.front();
    const GameSpec2x2& spec = data.games.at(s.game_id);
    if (spec.hidden_slots().empty()) {
      const Freq2x2 table = aggregate_session(s);
      const ValueGrid grid = make_uniform_grid(grid_lo, grid_hi, cfg.grid_step);
      for (Slot slot : kAllSlots) {
        GameSpec2x2 w = spec;
        w.set_payoff(slot, std::nullopt);
        RegretCurve c = regret_curve_2x2(w, slot, table, grid, slot_name(slot));
        curves.push_back(std::move(c));
      }
    }
  }

  ensure_out_dir(out_dir);
  {
    std::ofstream f(out_dir + "/estimates.csv");
    write_estimates_2x2_csv(f, rows);
  }
  if (!curves.empty()) {
    std::ofstream f(out_dir + "/curves.csv");
    write_regret_curves_csv(f, curves);
  }
  for (const auto& m : cfg.methods) {
    if (pairs_by_method.count(m))
      reports.push_back({m, compute_report(pairs_by_method.at(m), cfg.hit_delta, cfg.relative)});
  }
  if (!reports.empty()) {
    std::ofstream f(out_dir + "/report.csv");
    write_report_csv(f, reports);
    std::ofstream j(out_dir + "/report.json");
    j << report_to_json(reports).dump(2) << "\n";
  }

  nlohmann::json meta;
  meta["command"] = "estimate";
  meta["domain"] = "2x2";
  meta["level"] = cfg.level;
  meta["methods"] = cfg.methods;
  meta["lambda"] = cfg.lambda;
  meta["range"] = {grid_lo, grid_hi};
  meta["grid_step"] = cfg.grid_step;
  meta["hit_delta"] = cfg.hit_delta;
  meta["error"] = cfg.relative ? "rel" : "abs";
  meta["fine_grained_lambda_factor"] = "3/k over k summed same-role curves";
  meta["argmin_tie_rule"] = "smallest value";
  write_text_file(out_dir + "/meta.json", meta.dump(2) + "\n");
  return 0;
}

// ---- estimate: auction dataset ----

struct CliAuctionConfig {
  std::string auction_file;
  std::vector<std::string> bid_files;
  std::string truth_file;
  std::vector<std::string> methods;  // default depends on mechanism
  double lambda = 1.0;
  double lo = 1.0, hi = 60.0;
  double grid_step = 1.0;
  double hit_delta = 6.0;
  bool relative = false;
  bool second_half = false;
  bool emit_curves = true;
};

int cmd_estimate_auction(const CliAuctionConfig& cfg, const std::string& out_dir) {
  const AuctionSpec spec = read_auction_json_file(cfg.auction_file);
  if (cfg.bid_files.empty()) throw validation_error("estimate: need at least one --bids file");

  std::vector<std::string> methods = cfg.methods;
  if (methods.empty()) {
    methods = spec.mechanism == Mechanism::kGsp
                  ? std::vector<std::string>{"qr", "mr", "eq1", "eq2"}
                  : std::vector<std::string>{"qr", "mr", "eq"};
  }

  std::map<std::string, double> truth;
  if (!cfg.truth_file.empty()) truth = read_truth_csv_file(cfg.truth_file);

  const ValueGrid grid = make_uniform_grid(cfg.lo, cfg.hi, cfg.grid_step);
  std::vector<EstimateAuctionRow> rows;
  std::map<std::string, std::vector<EstimatePair>> pairs_by_method;
  std::vector<RegretCurve> curves;
  bool estimator_failure = false;

  for (const std::string& path : cfg.bid_files) {
    const std::string session_id = file_stem(path);
    BidLog log = read_bidlog_csv_file(path);
    if (cfg.second_half) log = log.second_half();
    if (log.num_players() != spec.n_players)
      throw validation_error("estimate: log '" + path + "' has " +
                             std::to_string(log.num_players()) + " players, spec expects " +
                             std::to_string(spec.n_players));

    std::map<std::string, RegretCurve> curve_by_player;
    const bool needs_curves =
        std::any_of(methods.begin(), methods.end(), [](const std::string& m) {
          return m == "qr" || m == "mr" || m == "mr_rel";
        });
    if (needs_curves) {
      for (const std::string& id : log.player_ids) {
        const auto candidates = default_bid_candidates(log, log.player_index(id), grid);
        RegretCurve c =
            spec.mechanism == Mechanism::kFirstPrice
                ? regret_curve_first_price(log, spec, id, grid, candidates)
                : regret_curve_position_auction(log, spec, id, grid, candidates);
        c.player_id = session_id + "/" + id;
        curve_by_player.emplace(id, std::move(c));
      }
    }

    auto push_row = [&](const std::string& method, const std::string& id, double estimate) {
      EstimateAuctionRow row;
      row.session_id = session_id;
      row.player_id = id;
      row.method = method;
      row.estimate = estimate;
      if (truth.count(id)) row.true_value = truth.at(id);
      rows.push_back(row);
      if (row.true_value)
        pairs_by_method[method].push_back({session_id + "/" + id, estimate, *row.true_value});
    };

    for (const std::string& method : methods) {
      if (method == "qr") {
        for (const auto& id : log.player_ids)
          push_row("qr", id, quantal_regret(curve_by_player.at(id), cfg.lambda));
      } else if (method == "mr") {
        for (const auto& id : log.player_ids)
          push_row("mr", id, min_regret(curve_by_player.at(id)));
      } else if (method == "mr_rel") {
        for (const auto& id : log.player_ids) {
          const RegretCurve& c = curve_by_player.at(id);
          push_row("mr_rel", id, min_relative_regret(c, c.best_fixed));
        }
      } else if (method == "eq") {
        for (const auto& id : log.player_ids) push_row("eq", id, eq_vcg_average_bid(log, id));
      } else if (method == "eq1") {
        for (const Eq1Estimate& e : eq1_lowest_sne(log, spec, cfg.lo, cfg.hi)) {
          if (e.failed) {
            std::cerr << "error: eq1 skipped " << e.rounds_skipped
                      << " rounds (over half) in session " << session_id << "\n";
            estimator_failure = true;
          }
          push_row("eq1", e.player_id, e.estimate);
        }
      } else if (method == "eq2") {
        for (const auto& id : log.player_ids) {
          const auto candidates = default_bid_candidates(log, log.player_index(id), grid);
          push_row("eq2", id, eq2_best_response(log, spec, id, grid, candidates));
        }
      } else {
        throw validation_error("estimate: unknown auction method '" + method + "'");
      }
    }

    for (auto& [id, c] : curve_by_player) curves.push_back(std::move(c));
  }

  ensure_out_dir(out_dir);
  {
    std::ofstream f(out_dir + "/estimates.csv");
    write_estimates_auction_csv(f, rows);
  }
  if (cfg.emit_curves && !curves.empty()) {
    std::ofstream f(out_dir + "/curves.csv");
    write_regret_curves_csv(f, curves);
  }
  std::vector<MethodReport> reports;
  for (const std::string& m : methods) {
    if (pairs_by_method.count(m))
      reports.push_back({m, compute_report(pairs_by_method.at(m), cfg.hit_delta, cfg.relative)});
  }
  if (!reports.empty()) {
    std::ofstream f(out_dir + "/report.csv");
    write_report_csv(f, reports);
    std::ofstream j(out_dir + "/report.json");
    j << report_to_json(reports).dump(2) << "\n";
  }

  nlohmann::json meta;
  meta["command"] = "estimate";
  meta["domain"] = "auction";
  meta["mechanism"] = mechanism_name(spec.mechanism);
  meta["methods"] = methods;
  meta["lambda"] = cfg.lambda;
  meta["range"] = {cfg.lo, cfg.hi};
  meta["grid_step"] = cfg.grid_step;
  meta["hit_delta"] = cfg.hit_delta;
  meta["error"] = cfg.relative ? "rel" : "abs";
  meta["half"] = cfg.second_half ? "second" : "full";
  meta["tie_rule"] = tie_rule_name(spec.tie_rule);
  meta["bid_candidates"] = "0, grid, observed opponent bids, and opponent bids + one grid step";
  meta["eq1"] = "lowest symmetric equilibrium; per-round least-squares projection (tol 1e-8); "
                "per-round values averaged";
  meta["eq2"] = "grid search; best-response ties toward the smallest bid, value ties toward "
                "the smallest value";
  write_text_file(out_dir + "/meta.json", meta.dump(2) + "\n");
  return estimator_failure ? 1 : 0;
}

// ---- sweeps ----

void append_table_cases(const std::string& id_prefix, const GameSpec2x2& spec,
                        const Freq2x2& table, const ValueGrid& grid,
                        std::vector<CurveCase>* cases,
                        std::optional<PlayerRole> only_role = std::nullopt) {
  for (Slot slot : kAllSlots) {
    if (only_role && slot_role(slot) != *only_role) continue;
    const auto truth = spec.payoff(slot);
    if (!truth) continue;
    GameSpec2x2 w = spec;
    w.set_payoff(slot, std::nullopt);
    CurveCase c;
    c.id = id_prefix + "/" + slot_name(slot);
    c.true_value = *truth;
    c.curves.push_back(regret_curve_2x2(w, slot, table, grid, slot_name(slot)));
    cases->push_back(std::move(c));
  }
}

std::vector<CurveCase> cases_2x2(const Dataset2x2& data, AggregationLevel level,
                                 const ValueGrid& grid) {
  std::vector<CurveCase> cases;

  if (level == AggregationLevel::kGame) {
    std::map<std::string, std::vector<Freq2x2>> tables_by_game;
    for (const Session2x2& s : data.sessions)
      tables_by_game[s.game_id].push_back(aggregate_session(s));
    for (const auto& [game_id, tables] : tables_by_game)
      append_table_cases(game_id, data.games.at(game_id), mean_freq(tables), grid, &cases);
    return cases;
  }

  for (const Session2x2& s : data.sessions) {
    const GameSpec2x2& spec = data.games.at(s.game_id);
    const std::string prefix = s.game_id + "/" + s.session_id;
    switch (level) {
      case AggregationLevel::kSession:
        append_table_cases(prefix, spec, aggregate_session(s), grid, &cases);
        break;
      case AggregationLevel::kPlayer:
        for (const PlayerFreq& p : s.players)
          append_table_cases(prefix + "/" + p.player_id, spec, p.freq, grid, &cases, p.role);
        break;
      case AggregationLevel::kFineGrained: {
        for (Slot slot : kAllSlots) {
          const auto truth = spec.payoff(slot);
          if (!truth) continue;
          GameSpec2x2 w = spec;
          w.set_payoff(slot, std::nullopt);
          CurveCase c;
          c.id = prefix + "/" + slot_name(slot);
          c.true_value = *truth;
          for (const PlayerFreq& p : s.players) {
            if (p.role != slot_role(slot)) continue;
            c.curves.push_back(regret_curve_2x2(w, slot, p.freq, grid, p.player_id));
          }
          c.lambda_factor = 3.0 / static_cast<double>(c.curves.size());
          cases.push_back(std::move(c));
        }
        break;
      }
      case AggregationLevel::kConstantSumSession:
        throw validation_error(
            "sweep: the constant-sum level pins its range to [0, C]; sweep the session "
            "level instead");
      case AggregationLevel::kGame:
        break;  // handled above
    }
  }
  return cases;
}

std::vector<CurveCase> cases_auction(const CliAuctionConfig& cfg, const ValueGrid& grid) {
  const AuctionSpec spec = read_auction_json_file(cfg.auction_file);
  if (cfg.truth_file.empty())
    throw validation_error("sweep: auction sweeps need --truth for the RMSE");
  const auto truth = read_truth_csv_file(cfg.truth_file);

  std::vector<CurveCase> cases;
  for (const std::string& path : cfg.bid_files) {
    BidLog log = read_bidlog_csv_file(path);
    if (cfg.second_half) log = log.second_half();
    for (const std::string& id : log.player_ids) {
      if (!truth.count(id))
        throw validation_error("sweep: player '" + id + "' missing from truth file");
      const auto candidates = default_bid_candidates(log, log.player_index(id), grid);
      CurveCase c;
      c.id = file_stem(path) + "/" + id;
      c.true_value = truth.at(id);
      c.curves.push_back(
          spec.mechanism == Mechanism::kFirstPrice
              ? regret_curve_first_price(log, spec, id, grid, candidates)
              : regret_curve_position_auction(log, spec, id, grid, candidates));
      cases.push_back(std::move(c));
    }
  }
  return cases;
}

// ---- simulate ----

int cmd_simulate(const std::string& scenario_file, const std::string& out_dir,
                 const std::optional<std::uint64_t>& seed_override) {
  Scenario sc = read_scenario_file(scenario_file);
  if (seed_override) sc.seed = *seed_override;
  ensure_out_dir(out_dir);

  std::map<std::string, double> truth;
  for (const AgentSpec& a : sc.agents) truth[a.id] = a.true_value;

  if (sc.kind == Scenario::Kind::kAuction) {
    const BidLog log = simulate_auction(sc.agents, sc.auction, sc.rounds, sc.seed, sc.bid_grid);
    write_bidlog_csv_file(out_dir + "/bids.csv", log);
    write_truth_csv_file(out_dir + "/truth.csv", truth);
  } else if (sc.kind == Scenario::Kind::kGame2x2) {
    const Freq2x2 table = simulate_game2x2(sc.agents, sc.game, sc.rounds, sc.seed);
    std::vector<FreqRecord> records = {
        {sc.session_id, sc.agents[0].id, PlayerRole::kRow, table},
        {sc.session_id, sc.agents[1].id, PlayerRole::kCol, table},
    };
    write_freq_csv_file(out_dir + "/freqs.csv", records);
  } else {
    const Session2x2 session = simulate_session2x2(sc.agents, sc.game, sc.rounds, sc.seed,
                                                   sc.game_id, sc.session_id);
    write_freq_csv_file(out_dir + "/freqs.csv", records_from_session(session));
  }

  nlohmann::json meta;
  meta["command"] = "simulate";
  meta["scenario"] = fs::path(scenario_file).filename().string();
  meta["rounds"] = sc.rounds;
  meta["seed"] = sc.seed;
  meta["rng"] = "mt19937_64 with splitmix64 per-agent streams, 53-bit uniforms";
  write_text_file(out_dir + "/meta.json", meta.dump(2) + "\n");
  return 0;
}

// ---- validate ----

int cmd_validate(const std::vector<std::string>& games, const std::vector<std::string>& freqs,
                 const std::vector<std::string>& bids, const std::vector<std::string>& auctions,
                 const std::vector<std::string>& scenarios) {
  int checked = 0;
  for (const auto& p : games) {
    read_games_json_file(p);
    std::cout << "ok: games " << p << "\n";
    ++checked;
  }
  for (const auto& p : freqs) {
    const auto records = read_freq_csv_file(p);
    std::cout << "ok: freqs " << p << " (" << records.size() << " records)\n";
    ++checked;
  }
  for (const auto& p : bids) {
    const BidLog log = read_bidlog_csv_file(p);
    std::cout << "ok: bids " << p << " (" << log.num_rounds() << " rounds, "
              << log.num_players() << " players)\n";
    ++checked;
  }
  for (const auto& p : auctions) {
    read_auction_json_file(p);
    std::cout << "ok: auction " << p << "\n";
    ++checked;
  }
  for (const auto& p : scenarios) {
    read_scenario_file(p);
    std::cout << "ok: scenario " << p << "\n";
    ++checked;
  }
  if (checked == 0) throw validation_error("validate: no files given");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hidden-value estimation for repeated games (quantal regret and baselines)"};
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate hidden parameters from observed play");
  std::string domain = "2x2";
  est->add_option("--domain", domain, "2x2 or auction")->check(CLI::IsMember({"2x2", "auction"}));
  Cli2x2Config g;
  CliAuctionConfig a;
  std::string out_dir = "out";
  std::string range_text, method_text, level_text = "session", error_text = "abs",
              half_text = "full";
  double lambda = -1.0, grid_step = -1.0, hit_delta = -1.0;
  est->add_option("--games", g.games_file, "games JSON (2x2)");
  est->add_option("--freqs", g.freq_files, "frequency CSV (2x2), repeatable");
  est->add_option("--game-id", g.game_ids, "game id per --freqs file (2x2)");
  est->add_option("--auction", a.auction_file, "auction spec JSON");
  est->add_option("--bids", a.bid_files, "bid log CSV, repeatable");
  est->add_option("--truth", a.truth_file, "player_id,true_value CSV");
  est->add_option("--method", method_text, "comma list: qr,mr,mr_rel,eq,eq1,eq2");
  est->add_option("--level", level_text,
                  "2x2 aggregation: game|session|fine_grained|player|constant_sum_session");
  est->add_option("--lambda", lambda, "regret aversion");
  est->add_option("--range", range_text, "LO:HI estimation range");
  est->add_option("--grid-step", grid_step, "grid step");
  est->add_option("--hit-delta", hit_delta, "hit-rate width");
  est->add_option("--error", error_text, "abs or rel")->check(CLI::IsMember({"abs", "rel"}));
  est->add_option("--half", half_text, "full or second")
      ->check(CLI::IsMember({"full", "second"}));
  est->add_option("--out", out_dir, "output directory");

  // sweep-lambda / sweep-range
  auto* swl = app.add_subcommand("sweep-lambda", "RMSE of QR across lambda values");
  auto* swr = app.add_subcommand("sweep-range", "Best lambda and RMSE across range upper bounds");
  std::string lambdas_text, uppers_text;
  for (CLI::App* sw : {swl, swr}) {
    sw->add_option("--domain", domain, "2x2 or auction")
        ->check(CLI::IsMember({"2x2", "auction"}));
    sw->add_option("--games", g.games_file, "games JSON (2x2)");
    sw->add_option("--freqs", g.freq_files, "frequency CSV (2x2), repeatable");
    sw->add_option("--game-id", g.game_ids, "game id per --freqs file (2x2)");
    sw->add_option("--auction", a.auction_file, "auction spec JSON");
    sw->add_option("--bids", a.bid_files, "bid log CSV, repeatable");
    sw->add_option("--truth", a.truth_file, "player_id,true_value CSV");
    sw->add_option("--level", level_text, "2x2 aggregation level");
    sw->add_option("--lambdas", lambdas_text, "comma list of lambda values")->required();
    sw->add_option("--range", range_text, "LO:HI estimation range");
    sw->add_option("--grid-step", grid_step, "grid step");
    sw->add_option("--half", half_text, "full or second")
        ->check(CLI::IsMember({"full", "second"}));
    sw->add_option("--out", out_dir, "output directory");
  }
  swr->add_option("--uppers", uppers_text, "comma list of range upper bounds")->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate synthetic play from a scenario");
  std::string scenario_file;
  std::uint64_t seed_value = 0;
  auto* seed_opt = sim->add_option("--seed", seed_value, "override the scenario seed");
  sim->add_option("--scenario", scenario_file, "scenario JSON")->required();
  sim->add_option("--out", out_dir, "output directory");

  // validate
  auto* val = app.add_subcommand("validate", "Validate input files");
  std::vector<std::string> v_games, v_freqs, v_bids, v_auctions, v_scenarios;
  val->add_option("--games", v_games, "games JSON files");
  val->add_option("--freqs", v_freqs, "frequency CSV files");
  val->add_option("--bids", v_bids, "bid log CSV files");
  val->add_option("--auction", v_auctions, "auction spec JSON files");
  val->add_option("--scenario", v_scenarios, "scenario JSON files");

  CLI11_PARSE(app, argc, argv);

  try {
    const bool is_2x2 = domain == "2x2";
    // Pinned defaults per domain.
    if (lambda < 0) lambda = is_2x2 ? 3.0 : 1.0;
    if (grid_step < 0) grid_step = 1.0;
    if (hit_delta < 0) hit_delta = is_2x2 ? 3.0 : 6.0;
    RangeOpt range;
    if (!range_text.empty()) range = parse_range(range_text);
    const double lo = range.set ? range.lo : (is_2x2 ? 0.0 : 1.0);
    const double hi = range.set ? range.hi : (is_2x2 ? 22.0 : 60.0);

    g.level = level_text;
    g.lambda = lambda;
    g.lo = lo;
    g.hi = hi;
    g.grid_step = grid_step;
    g.hit_delta = hit_delta;
    g.relative = error_text == "rel";
    if (!method_text.empty()) g.methods = split_list(method_text);

    a.lambda = lambda;
    a.lo = lo;
    a.hi = hi;
    a.grid_step = grid_step;
    a.hit_delta = hit_delta;
    a.relative = error_text == "rel";
    a.second_half = half_text == "second";
    if (!method_text.empty()) a.methods = split_list(method_text);

    if (est->parsed()) {
      if (is_2x2) {
        if (a.second_half)
          throw validation_error("estimate: --half second applies to auction logs only");
        return cmd_estimate_2x2(g, out_dir);
      }
      return cmd_estimate_auction(a, out_dir);
    }

    if (swl->parsed() || swr->parsed()) {
      const std::vector<double> lambdas = parse_double_list(lambdas_text, "lambdas");
      const AggregationLevel level = aggregation_level_from_name(level_text);
      ensure_out_dir(out_dir);
      if (swl->parsed()) {
        const ValueGrid grid = make_uniform_grid(lo, hi, grid_step);
        std::vector<CurveCase> cases;
        if (is_2x2) {
          cases = cases_2x2(load_2x2(g), level, grid);
        } else {
          cases = cases_auction(a, grid);
        }
        const LambdaSweepResult sweep = sweep_lambda(cases, lambdas);
        std::ofstream f(out_dir + "/lambda_sweep.csv");
        write_lambda_sweep_csv(f, sweep);
        nlohmann::json meta;
        meta["command"] = "sweep-lambda";
        meta["best_lambda"] = sweep.best_lambda;
        meta["best_rmse"] = sweep.best_rmse;
        meta["cases"] = cases.size();
        write_text_file(out_dir + "/meta.json", meta.dump(2) + "\n");
        std::cout << "best lambda " << format_double(sweep.best_lambda) << " rmse "
                  << format_double(sweep.best_rmse) << "\n";
        return 0;
      }
      // sweep-range is a 2x2 task: the grid is rebuilt per upper bound.
      if (!is_2x2) throw validation_error("sweep-range: only the 2x2 domain is supported");
      const std::vector<double> uppers = parse_double_list(uppers_text, "uppers");
      const Dataset2x2 data = load_2x2(g);
      const auto rows = sweep_range(
          [&](const ValueGrid& grid) { return cases_2x2(data, level, grid); }, lo, grid_step,
          uppers, lambdas);
      std::ofstream f(out_dir + "/range_sweep.csv");
      write_range_sweep_csv(f, rows);
      nlohmann::json meta;
      meta["command"] = "sweep-range";
      meta["lower"] = lo;
      meta["uppers"] = uppers;
      write_text_file(out_dir + "/meta.json", meta.dump(2) + "\n");
      return 0;
    }

    if (sim->parsed()) {
      std::optional<std::uint64_t> seed_override;
      if (seed_opt->count() > 0) seed_override = seed_value;
      return cmd_simulate(scenario_file, out_dir, seed_override);
    }
    if (val->parsed()) return cmd_validate(v_games, v_freqs, v_bids, v_auctions, v_scenarios);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
