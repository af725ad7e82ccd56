#pragma once

#include <span>
#include <string>
#include <vector>

#include "qregret/types.hpp"

namespace qregret {

// Outcome of one auction round. Payments are expectations over clicks
// (CTR-weighted), in coins per auction.
struct RoundOutcome {
  std::vector<int> slot;        // slot index per player, -1 if unallocated
  std::vector<double> ctr;      // awarded CTR per player (0 if no slot)
  std::vector<double> payment;  // expected payment per player
};

// Allocates slots by descending bid (ties per spec.tie_rule, player index
// standing in for the id order) and prices them by the mechanism's rule.
RoundOutcome run_round(std::span<const double> bids, const AuctionSpec& spec);

// Expected CTR and expected payment per auction for one player bidding b
// against fixed opponent bids, replayed over every round of the log.
// Precomputes rank tables so evaluating many candidate bids is cheap.
class BidReplay {
 public:
  BidReplay(const BidLog& log, const AuctionSpec& spec, int player);

  // Per-round average CTR / payment the player earns by bidding `b` in every
  // round. For FIRST_PRICE the tie goes to the player regardless of tie_rule.
  double avg_ctr(double b) const;
  double avg_payment(double b) const;
  void lookup(double b, double* out_ctr, double* out_payment) const;

  // The player's empirical play, same units.
  double empirical_ctr() const { return emp_ctr_; }
  double empirical_payment() const { return emp_pay_; }

  int num_rounds() const { return num_rounds_; }

 private:
  struct Round {
    std::vector<double> opp_bids;      // descending
    std::vector<bool> opp_wins_tie;    // aligned with opp_bids
    std::vector<double> ctr_at_rank;   // rank 0..n-1
    std::vector<double> pay_at_rank;   // mechanism price, excluding first-price
  };

  int rank_of(const Round& r, double b) const;

  Mechanism mechanism_;
  std::vector<Round> rounds_;
  int num_rounds_ = 0;
  double emp_ctr_ = 0.0;
  double emp_pay_ = 0.0;
};

// Classic estimator for truthful auctions: the player's mean bid.
double eq_vcg_average_bid(const BidLog& log, const std::string& player);

struct Eq1Estimate {
  std::string player_id;
  double estimate = 0.0;
  int rounds_used = 0;
  int rounds_skipped = 0;
  bool failed = false;  // over half the rounds skipped
};

// Inverts the lowest symmetric (VCG-price) equilibrium of the full-information
// GSP game round by round. Rounds violating the equilibrium inequalities are
// first projected onto them (least squared change in the bids). Per-player
// estimates are means of the per-round deduced values, clipped to [lo, hi].
std::vector<Eq1Estimate> eq1_lowest_sne(const BidLog& log, const AuctionSpec& spec,
                                    double lo, double hi);

// Best response to the empirical distribution of opponent bids: picks the grid
// value whose best-responding bid is closest to the player's mean bid.
double eq2_best_response(const BidLog& log, const AuctionSpec& spec,
                         const std::string& player, const ValueGrid& grid,
                         std::span<const double> bid_candidates);

namespace detail {

// Deduced per-position values of the lowest symmetric GSP equilibrium for one
// round of sorted-descending bids. values[i] corresponds to sorted position i.
std::vector<double> invert_lowest_sne(std::span<const double> sorted_bids,
                                      std::span<const double> ctrs);

// True if the sorted bids admit values making them a symmetric equilibrium.
bool sne_consistent(std::span<const double> sorted_bids, std::span<const double> ctrs,
                    double tol);

// Least-squares projection of sorted bids onto the SNE-consistency polytope
// (monotone deduced values + preserved bid order + nonnegativity), by dual
// coordinate descent. Returns false if the iteration cap is hit.
bool project_to_sne(std::span<const double> sorted_bids, std::span<const double> ctrs,
                    std::vector<double>* projected, double tol = 1e-8,
                    int max_sweeps = 20000);

}  // namespace detail

}  // namespace qregret
