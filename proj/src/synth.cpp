#include "qregret/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qregret/auctions.hpp"

namespace qregret {

std::size_t Rng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = uniform01() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kExpWeights: return "EXP_WEIGHTS";
    case AgentKind::kTruthful: return "TRUTHFUL";
    case AgentKind::kFixedBid: return "FIXED_BID";
    case AgentKind::kUniformRandom: return "UNIFORM_RANDOM";
    case AgentKind::kEpsilonBestResponse: return "EPSILON_BEST_RESPONSE";
  }
  throw internal_error("agent_kind_name: bad kind");
}

AgentKind agent_kind_from_name(const std::string& name) {
  if (name == "EXP_WEIGHTS") return AgentKind::kExpWeights;
  if (name == "TRUTHFUL") return AgentKind::kTruthful;
  if (name == "FIXED_BID") return AgentKind::kFixedBid;
  if (name == "UNIFORM_RANDOM") return AgentKind::kUniformRandom;
  if (name == "EPSILON_BEST_RESPONSE") return AgentKind::kEpsilonBestResponse;
  throw validation_error("agent: unknown kind '" + name + "'");
}

void AgentSpec::validate() const {
  if (!std::isfinite(true_value)) throw validation_error("agent: true_value must be finite");
  if (kind == AgentKind::kExpWeights && !(learning_rate > 0.0))
    throw validation_error("agent: EXP_WEIGHTS needs learning_rate > 0");
  if (kind == AgentKind::kEpsilonBestResponse && !(epsilon >= 0.0 && epsilon <= 1.0))
    throw validation_error("agent: epsilon must lie in [0, 1]");
  if (kind == AgentKind::kFixedBid && (!std::isfinite(fixed_bid) || fixed_bid < 0.0))
    throw validation_error("agent: fixed_bid must be nonnegative");
}

namespace {

double utility_for_bid(const AuctionSpec& spec, std::vector<double> bids, int player,
                       double bid, double value) {
  bids[static_cast<std::size_t>(player)] = bid;
  const RoundOutcome out = run_round(bids, spec);
  return out.ctr[static_cast<std::size_t>(player)] * value -
         out.payment[static_cast<std::size_t>(player)];
}

struct AuctionAgentState {
  AgentSpec spec;
  Rng rng;
  std::vector<double> log_weights;  // EXP_WEIGHTS, over the bid grid
  double next_best_response = 0.0;  // EPSILON_BEST_RESPONSE
  bool has_best_response = false;
};

}  // namespace

BidLog simulate_auction(std::span<const AgentSpec> agents, const AuctionSpec& spec,
                        int rounds, std::uint64_t seed, const BidGridSpec& bid_grid) {
  spec.validate();
  if (static_cast<int>(agents.size()) != spec.n_players)
    throw validation_error("simulate: " + std::to_string(agents.size()) + " agents for " +
                           std::to_string(spec.n_players) + " players");
  if (rounds < 1) throw validation_error("simulate: rounds must be >= 1");

  const ValueGrid actions = make_uniform_grid(bid_grid.lower, bid_grid.upper, bid_grid.step);
  const std::size_t num_actions = actions.size();

  std::vector<AuctionAgentState> states;
  states.reserve(agents.size());
  {
    std::vector<AgentSpec> ordered(agents.begin(), agents.end());
    std::sort(ordered.begin(), ordered.end(),
              [](const AgentSpec& a, const AgentSpec& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      ordered[i].validate();
      if (ordered[i].id.empty())
        throw validation_error("simulate: agents need non-empty ids");
      if (i > 0 && ordered[i].id == ordered[i - 1].id)
        throw validation_error("simulate: duplicate agent id '" + ordered[i].id + "'");
      AuctionAgentState st{ordered[i], Rng(mix_seed(mix_seed(seed, i), ordered[i].seed)), {}, 0.0,
                           false};
      if (st.spec.kind == AgentKind::kExpWeights)
        st.log_weights.assign(num_actions, 0.0);
      states.push_back(std::move(st));
    }
  }

  BidLog log;
  for (const auto& st : states) log.player_ids.push_back(st.spec.id);

  const int n = spec.n_players;
  std::vector<double> bids(static_cast<std::size_t>(n), 0.0);
  std::vector<double> weights(num_actions);

  for (int t = 0; t < rounds; ++t) {
    for (int i = 0; i < n; ++i) {
      AuctionAgentState& st = states[static_cast<std::size_t>(i)];
      switch (st.spec.kind) {
        case AgentKind::kTruthful:
          bids[static_cast<std::size_t>(i)] = st.spec.true_value;
          break;
        case AgentKind::kFixedBid:
          bids[static_cast<std::size_t>(i)] = st.spec.fixed_bid;
          break;
        case AgentKind::kUniformRandom:
          bids[static_cast<std::size_t>(i)] = actions.points[st.rng.uniform_index(num_actions)];
          break;
        case AgentKind::kExpWeights: {
          const double top =
              *std::max_element(st.log_weights.begin(), st.log_weights.end());
          for (std::size_t k = 0; k < num_actions; ++k)
            weights[k] = std::exp(st.log_weights[k] - top);
          bids[static_cast<std::size_t>(i)] = actions.points[st.rng.categorical(weights)];
          break;
        }
        case AgentKind::kEpsilonBestResponse: {
          const bool explore = !st.has_best_response || st.rng.uniform01() < st.spec.epsilon;
          bids[static_cast<std::size_t>(i)] =
              explore ? actions.points[st.rng.uniform_index(num_actions)]
                      : st.next_best_response;
          break;
        }
      }
    }
    log.rounds.push_back(bids);

    // Full-information updates against this round's bids.
    for (int i = 0; i < n; ++i) {
      AuctionAgentState& st = states[static_cast<std::size_t>(i)];
      if (st.spec.kind == AgentKind::kExpWeights) {
        for (std::size_t k = 0; k < num_actions; ++k) {
          const double u =
              utility_for_bid(spec, bids, i, actions.points[k], st.spec.true_value);
          st.log_weights[k] += st.spec.learning_rate * u;
        }
      } else if (st.spec.kind == AgentKind::kEpsilonBestResponse) {
        double best_u = -std::numeric_limits<double>::infinity();
        double best_b = actions.points.front();
        for (double b : actions.points) {
          const double u = utility_for_bid(spec, bids, i, b, st.spec.true_value);
          if (u > best_u) {
            best_u = u;
            best_b = b;
          }
        }
        st.next_best_response = best_b;
        st.has_best_response = true;
      }
    }
  }
  log.validate();
  return log;
}

namespace {

// Cell index of the joint action (row 0=Up, column 0=Left).
std::size_t cell_of(int row_action, int col_action) {
  return static_cast<std::size_t>(row_action) * 2 + static_cast<std::size_t>(col_action);
}

// Payoff of `role` when the row player picks `a` (0=Up) and the column player
// picks `b` (0=Left).
double payoff_2x2(const GameSpec2x2& spec, PlayerRole role, int a, int b) {
  static constexpr std::array<std::array<Slot, 4>, 2> cells = {{
      {Slot::kRowUL, Slot::kRowUR, Slot::kRowDL, Slot::kRowDR},
      {Slot::kColUL, Slot::kColUR, Slot::kColDL, Slot::kColDR},
  }};
  const Slot s = cells[role == PlayerRole::kRow ? 0 : 1][cell_of(a, b)];
  const auto v = spec.payoff(s);
  if (!v) throw task_error("simulate: game has hidden payoffs; simulation needs all eight");
  return *v;
}

struct GameAgentState {
  AgentSpec spec;
  PlayerRole role = PlayerRole::kRow;
  Rng rng;
  std::array<double, 2> log_weights = {0.0, 0.0};
  int next_best_response = 0;
  bool has_best_response = false;

  int pick_action() {
    switch (spec.kind) {
      case AgentKind::kTruthful:
        throw task_error("simulate: TRUTHFUL agents are auction-only");
      case AgentKind::kFixedBid:
        return spec.fixed_bid < 0.5 ? 0 : 1;
      case AgentKind::kUniformRandom:
        return static_cast<int>(rng.uniform_index(2));
      case AgentKind::kExpWeights: {
        const double top = std::max(log_weights[0], log_weights[1]);
        const std::array<double, 2> w = {std::exp(log_weights[0] - top),
                                         std::exp(log_weights[1] - top)};
        return static_cast<int>(rng.categorical(w));
      }
      case AgentKind::kEpsilonBestResponse: {
        const bool explore = !has_best_response || rng.uniform01() < spec.epsilon;
        return explore ? static_cast<int>(rng.uniform_index(2)) : next_best_response;
      }
    }
    throw internal_error("pick_action: bad kind");
  }

  void learn(const GameSpec2x2& game, int opponent_action) {
    if (spec.kind == AgentKind::kExpWeights) {
      for (int a = 0; a < 2; ++a) {
        const double u = role == PlayerRole::kRow ? payoff_2x2(game, role, a, opponent_action)
                                                  : payoff_2x2(game, role, opponent_action, a);
        log_weights[static_cast<std::size_t>(a)] += spec.learning_rate * u;
      }
    } else if (spec.kind == AgentKind::kEpsilonBestResponse) {
      const double u0 = role == PlayerRole::kRow ? payoff_2x2(game, role, 0, opponent_action)
                                                 : payoff_2x2(game, role, opponent_action, 0);
      const double u1 = role == PlayerRole::kRow ? payoff_2x2(game, role, 1, opponent_action)
                                                 : payoff_2x2(game, role, opponent_action, 1);
      next_best_response = u1 > u0 ? 1 : 0;
      has_best_response = true;
    }
  }
};

Freq2x2 table_from_counts(const std::array<int, 4>& counts, int rounds) {
  Freq2x2 f;
  f.f_ul = static_cast<double>(counts[0]) / rounds;
  f.f_ur = static_cast<double>(counts[1]) / rounds;
  f.f_dl = static_cast<double>(counts[2]) / rounds;
  f.f_dr = static_cast<double>(counts[3]) / rounds;
  f.periods = rounds;
  return validate_freq(f);
}

}  // namespace

Freq2x2 simulate_game2x2(std::span<const AgentSpec> agents, const GameSpec2x2& spec,
                         int rounds, std::uint64_t seed) {
  spec.validate();
  if (!spec.hidden_slots().empty())
    throw task_error("simulate: game has hidden payoffs; simulation needs all eight");
  if (agents.size() != 2) throw validation_error("simulate: 2x2 game needs exactly 2 agents");
  if (rounds < 1) throw validation_error("simulate: rounds must be >= 1");
  for (const AgentSpec& a : agents) a.validate();

  GameAgentState row{agents[0], PlayerRole::kRow, Rng(mix_seed(mix_seed(seed, 0), agents[0].seed))};
  GameAgentState col{agents[1], PlayerRole::kCol, Rng(mix_seed(mix_seed(seed, 1), agents[1].seed))};

  std::array<int, 4> counts = {0, 0, 0, 0};
  for (int t = 0; t < rounds; ++t) {
    const int a = row.pick_action();
    const int b = col.pick_action();
    counts[cell_of(a, b)] += 1;
    row.learn(spec, b);
    col.learn(spec, a);
  }
  return table_from_counts(counts, rounds);
}

Session2x2 simulate_session2x2(std::span<const AgentSpec> agents, const GameSpec2x2& spec,
                               int rounds, std::uint64_t seed, const std::string& game_id,
                               const std::string& session_id) {
  spec.validate();
  if (!spec.hidden_slots().empty())
    throw task_error("simulate: game has hidden payoffs; simulation needs all eight");
  if (agents.size() != 8)
    throw validation_error("simulate: a session needs exactly 8 agents (4 row, 4 col)");
  if (rounds < 1) throw validation_error("simulate: rounds must be >= 1");

  std::vector<GameAgentState> states;
  for (std::size_t i = 0; i < 8; ++i) {
    agents[i].validate();
    states.push_back(GameAgentState{agents[i], i < 4 ? PlayerRole::kRow : PlayerRole::kCol,
                                    Rng(mix_seed(mix_seed(seed, i), agents[i].seed))});
  }

  Rng match_rng(mix_seed(seed, 0xABCDULL));
  std::array<std::array<int, 4>, 8> counts{};

  std::array<std::size_t, 4> col_of = {0, 1, 2, 3};
  for (int t = 0; t < rounds; ++t) {
    // Re-match: uniformly random assignment of column players to row players.
    for (std::size_t i = 3; i > 0; --i)
      std::swap(col_of[i], col_of[match_rng.uniform_index(i + 1)]);
    for (std::size_t r = 0; r < 4; ++r) {
      GameAgentState& row = states[r];
      GameAgentState& col = states[4 + col_of[r]];
      const int a = row.pick_action();
      const int b = col.pick_action();
      counts[r][cell_of(a, b)] += 1;
      counts[4 + col_of[r]][cell_of(a, b)] += 1;
      row.learn(spec, b);
      col.learn(spec, a);
    }
  }

  Session2x2 session;
  session.game_id = game_id;
  session.session_id = session_id;
  for (std::size_t i = 0; i < 8; ++i) {
    session.players.push_back({states[i].spec.id.empty() ? "a" + std::to_string(i + 1)
                                                         : states[i].spec.id,
                               states[i].role, table_from_counts(counts[i], rounds)});
  }
  session.validate();
  return session;
}

}  // namespace qregret
