#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "qregret/auctions.hpp"
#include "qregret/types.hpp"

namespace qregret {

// Per-candidate-value regret for one player. `regrets` and `best_fixed` are
// aligned with the grid; best_fixed holds the optimal fixed-action utility at
// each candidate value (the comparator the regret is measured against), which
// the relative-regret estimator divides by.
struct RegretCurve {
  ValueGrid grid;
  std::vector<double> regrets;
  std::vector<double> best_fixed;
  std::string player_id;

  void validate() const;
};

// Per-round utilities of the row player: the two fixed-action utilities
// against the column player's empirical marginal, and the realized utility
// under the joint empirical play.
struct RowUtilities {
  double up = 0.0;
  double down = 0.0;
  double emp = 0.0;
};

RowUtilities row_utilities_2x2(const std::array<double, 4>& row_payoffs, const Freq2x2& freq);

// max(util_Up, util_Down) - util_Emp, clamped to >= 0. The candidate value is
// already substituted into row_payoffs.
double regret_2x2_row(const std::array<double, 4>& row_payoffs, const Freq2x2& freq);

// Regret of the hidden slot's owner at every grid point. The hidden slot must
// be the only unknown payoff of its owner; column-player slots are handled by
// transposing the game and the frequency table.
RegretCurve regret_curve_2x2(const GameSpec2x2& spec, Slot hidden, const Freq2x2& freq,
                             const ValueGrid& grid, const std::string& player_id = "");

// Fixed-bid candidate set for the best-response search: 0, every grid point,
// and every observed opponent bid both exactly and one tick above (tick =
// grid step). The optimum of the best-fixed-bid objective always sits at one
// of these boundaries. Sorted ascending, deduplicated.
std::vector<double> default_bid_candidates(const BidLog& log, int player, const ValueGrid& grid);

// First-price sealed-bid regret curve; the player wins ties regardless of the
// spec's tie rule. Regret is per round.
RegretCurve regret_curve_first_price(const BidLog& log, const AuctionSpec& spec,
                                     const std::string& player, const ValueGrid& grid,
                                     std::span<const double> bid_candidates);

// GSP/VCG position-auction regret curve, per round, ties per spec.tie_rule.
RegretCurve regret_curve_position_auction(const BidLog& log, const AuctionSpec& spec,
                                          const std::string& player, const ValueGrid& grid,
                                          std::span<const double> bid_candidates);

// Pointwise sum of curves sharing one grid (total regret of a player group).
RegretCurve sum_curves(std::span<const RegretCurve> curves);

}  // namespace qregret
