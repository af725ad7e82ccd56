#pragma once

#include <span>
#include <string>
#include <vector>

#include "qregret/types.hpp"

namespace qregret::testing {

// Naive exhaustive-search regret, independent of the engine's replay tables:
// replays every (candidate bid, round) pair from scratch with its own
// allocation and payment code.
std::vector<double> oracle_auction_regret(const BidLog& log, const AuctionSpec& spec,
                                          const std::string& player, const ValueGrid& grid,
                                          std::span<const double> bid_candidates);

// Single-round utility for the same naive path (used by agent sanity checks).
double oracle_round_utility(const AuctionSpec& spec, std::span<const double> bids,
                            int player, double value, bool player_wins_ties);

}  // namespace qregret::testing
