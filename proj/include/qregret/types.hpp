#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qregret/common.hpp"

namespace qregret {

// Finite ascending grid of candidate parameter values with a prior weight per
// point. Immutable after construction; the default prior is uniform.
struct ValueGrid {
  std::vector<double> points;
  std::vector<double> prior;

  std::size_t size() const { return points.size(); }
  double step() const;  // spacing of a uniform grid (gap between first two points)
  void validate() const;

  bool same_points(const ValueGrid& other) const;
};

// Closed-on-both-ends uniform grid {lower, lower+step, ...}; a final point
// landing within 1e-9 of `upper` is snapped to it and kept.
ValueGrid make_uniform_grid(double lower, double upper, double step);

ValueGrid make_grid_with_prior(std::vector<double> points, std::vector<double> prior);

// Empirical frequency of the four strategy profiles of a 2x2 game over
// `periods` plays.
struct Freq2x2 {
  double f_ul = 0.0;
  double f_ur = 0.0;
  double f_dl = 0.0;
  double f_dr = 0.0;
  int periods = 1;

  double left_marginal() const { return f_ul + f_dl; }    // column player plays Left
  double up_marginal() const { return f_ul + f_ur; }      // row player plays Up
  Freq2x2 transposed() const;                             // swaps the two roles
};

// Returns the input if the invariants hold; names the offending field if not.
Freq2x2 validate_freq(const Freq2x2& freq);

enum class PlayerRole { kRow, kCol };

std::string role_name(PlayerRole role);
PlayerRole role_from_name(const std::string& name);

// One of the eight payoff entries of a 2x2 bimatrix game.
enum class Slot {
  kRowUL, kRowUR, kRowDL, kRowDR,
  kColUL, kColUR, kColDL, kColDR,
};

inline constexpr std::array<Slot, 8> kAllSlots = {
    Slot::kRowUL, Slot::kRowUR, Slot::kRowDL, Slot::kRowDR,
    Slot::kColUL, Slot::kColUR, Slot::kColDL, Slot::kColDR,
};

PlayerRole slot_role(Slot slot);
std::string slot_name(Slot slot);
Slot slot_from_name(const std::string& name);

// 2x2 bimatrix game; any payoff slot may be hidden (empty optional).
// Cell order within each array: UL, UR, DL, DR.
struct GameSpec2x2 {
  std::array<std::optional<double>, 4> row_payoffs;
  std::array<std::optional<double>, 4> col_payoffs;
  std::optional<double> constant_sum;

  std::optional<double> payoff(Slot slot) const;
  void set_payoff(Slot slot, std::optional<double> value);
  bool is_hidden(Slot slot) const { return !payoff(slot).has_value(); }
  std::vector<Slot> hidden_slots() const;
  std::vector<Slot> hidden_slots(PlayerRole role) const;

  GameSpec2x2 transposed() const;
  void validate() const;
};

// Maps a slot to its mirror under role transposition (RowUR <-> ColDL etc.).
Slot transposed_slot(Slot slot);

// Observed joint bids over T rounds. Player order is the canonical order used
// everywhere (tie-breaking, output columns): ids sorted ascending.
struct BidLog {
  std::vector<std::string> player_ids;
  std::vector<std::vector<double>> rounds;  // T x n

  int num_players() const { return static_cast<int>(player_ids.size()); }
  int num_rounds() const { return static_cast<int>(rounds.size()); }
  int player_index(const std::string& id) const;  // -1 if absent
  void validate() const;

  // Rounds floor(T/2)+1 .. T, for evaluation that skips a learning phase.
  BidLog second_half() const;
};

enum class Mechanism { kFirstPrice, kGsp, kVcg };

std::string mechanism_name(Mechanism mech);
Mechanism mechanism_from_name(const std::string& name);

// Deterministic resolution of equal bids: which player id gets the better slot.
enum class TieRule { kLowestIdWins, kHighestIdWins };

std::string tie_rule_name(TieRule rule);
TieRule tie_rule_from_name(const std::string& name);

// Position auction: m slots with strictly descending click-through rates.
// Players beyond the number of slots get no slot and pay nothing.
struct AuctionSpec {
  Mechanism mechanism = Mechanism::kGsp;
  std::vector<double> ctrs;
  int n_players = 0;
  TieRule tie_rule = TieRule::kLowestIdWins;

  int num_slots() const { return static_cast<int>(ctrs.size()); }
  void validate() const;
};

}  // namespace qregret
