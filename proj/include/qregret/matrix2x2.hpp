#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qregret/estimators.hpp"
#include "qregret/regret.hpp"
#include "qregret/types.hpp"

namespace qregret {

struct PlayerFreq {
  std::string player_id;
  PlayerRole role = PlayerRole::kRow;
  Freq2x2 freq;
};

// One experimental session: four row-role and four column-role players, each
// with its own empirical frequency table.
struct Session2x2 {
  std::string game_id;
  std::string session_id;
  std::vector<PlayerFreq> players;

  void validate() const;
};

enum class AggregationLevel { kGame, kSession, kFineGrained, kPlayer, kConstantSumSession };

std::string aggregation_level_name(AggregationLevel level);
AggregationLevel aggregation_level_from_name(const std::string& name);

enum class Method { kQr, kMr, kMrRel, kEq };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

// Per-profile arithmetic mean of frequency tables.
Freq2x2 mean_freq(std::span<const Freq2x2> tables);

// Mean of the session's eight player tables.
Freq2x2 aggregate_session(const Session2x2& session);

// Solves the hidden slot's owner's mixed-equilibrium indifference condition
// linearly for the hidden entry, using the opponent's empirical marginal, and
// clips the result to [lo, hi]. If the hidden entry drops out of the equation
// (its marginal multiplier is zero) the estimate is undefined: the range
// midpoint is returned and *degenerate is set.
double nash_inversion_2x2(const GameSpec2x2& spec, Slot hidden, const Freq2x2& freq,
                          double lo, double hi, bool* degenerate = nullptr);

struct SlotEstimate {
  Slot slot = Slot::kRowUL;
  std::string scope;  // "session" or the player id at player level
  double estimate = 0.0;
  std::optional<double> true_value;
  bool degenerate = false;
};

// Estimates the game's payoff parameters from one session at the given
// aggregation level. Slots with a known payoff are hidden one at a time and
// re-estimated (the known value is reported as the truth); slots hidden in
// the spec are estimated without a truth. kGame on a single session equals
// kSession; use estimate_game to pool sessions.
//
// Levels:
//   kSession       one 8-player mean table, 8 slot estimates
//   kFineGrained   per-slot sum of the 4 same-role curves, lambda scaled by
//                  3/k (k summed curves); EQ falls back to the session table
//   kPlayer        each player estimates its own role's 4 slots (32 records)
//   kConstantSumSession  4 row entries on [0, C]: row curve at v plus column
//                  curve at C - v, both from the session table
std::vector<SlotEstimate> estimate_session(const Session2x2& session, const GameSpec2x2& spec,
                                           AggregationLevel level, Method method,
                                           const ValueGrid& grid, double lambda);

// Game-level estimate: sessions' mean tables are averaged first, then the
// session-level procedure runs once on the pooled table.
std::vector<SlotEstimate> estimate_game(std::span<const Session2x2> sessions,
                                        const GameSpec2x2& spec, Method method,
                                        const ValueGrid& grid, double lambda);

}  // namespace qregret
