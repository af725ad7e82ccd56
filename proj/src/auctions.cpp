#include "qregret/auctions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qregret {

namespace {

// Sort order of one round: descending bid, ties resolved by the rule.
std::vector<int> sorted_order(std::span<const double> bids, TieRule rule) {
  std::vector<int> order(bids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (bids[a] != bids[b]) return bids[a] > bids[b];
    return rule == TieRule::kLowestIdWins ? a < b : a > b;
  });
  return order;
}

double vcg_slot_payment(std::span<const double> sorted_bids, std::span<const double> ctrs,
                        int s) {
  const int n = static_cast<int>(sorted_bids.size());
  const int num_seated = std::min<int>(n, static_cast<int>(ctrs.size()));
  double total = 0.0;
  for (int k = s + 1; k < num_seated; ++k) total += (ctrs[k - 1] - ctrs[k]) * sorted_bids[k];
  if (num_seated < n) total += ctrs[num_seated - 1] * sorted_bids[num_seated];
  return total;
}

}  // namespace

RoundOutcome run_round(std::span<const double> bids, const AuctionSpec& spec) {
  spec.validate();
  if (static_cast<int>(bids.size()) != spec.n_players)
    throw validation_error("run_round: got " + std::to_string(bids.size()) +
                           " bids for " + std::to_string(spec.n_players) + " players");

  const int n = spec.n_players;
  const auto order = sorted_order(bids, spec.tie_rule);
  std::vector<double> sorted_bids(n);
  for (int s = 0; s < n; ++s) sorted_bids[s] = bids[order[s]];

  RoundOutcome out;
  out.slot.assign(n, -1);
  out.ctr.assign(n, 0.0);
  out.payment.assign(n, 0.0);

  const int num_seated = std::min(n, spec.num_slots());
  for (int s = 0; s < num_seated; ++s) {
    const int p = order[s];
    out.slot[p] = s;
    out.ctr[p] = spec.ctrs[s];
    switch (spec.mechanism) {
      case Mechanism::kFirstPrice:
        out.payment[p] = sorted_bids[s];
        break;
      case Mechanism::kGsp:
        out.payment[p] = spec.ctrs[s] * (s + 1 < n ? sorted_bids[s + 1] : 0.0);
        break;
      case Mechanism::kVcg:
        out.payment[p] = vcg_slot_payment(sorted_bids, spec.ctrs, s);
        break;
    }
  }
  return out;
}

BidReplay::BidReplay(const BidLog& log, const AuctionSpec& spec, int player)
    : mechanism_(spec.mechanism) {
  log.validate();
  spec.validate();
  if (player < 0 || player >= log.num_players())
    throw validation_error("replay: player index out of range");
  if (log.num_players() != spec.n_players)
    throw validation_error("replay: log has " + std::to_string(log.num_players()) +
                           " players, spec expects " + std::to_string(spec.n_players));

  const int n = log.num_players();
  num_rounds_ = log.num_rounds();
  rounds_.reserve(static_cast<std::size_t>(num_rounds_));

  double emp_ctr_sum = 0.0;
  double emp_pay_sum = 0.0;
  for (int t = 0; t < num_rounds_; ++t) {
    Round r;
    r.opp_bids.reserve(static_cast<std::size_t>(n - 1));
    std::vector<int> opp_ids;
    for (int j = 0; j < n; ++j) {
      if (j != player) opp_ids.push_back(j);
    }
    std::sort(opp_ids.begin(), opp_ids.end(), [&](int a, int b) {
      if (log.rounds[t][a] != log.rounds[t][b]) return log.rounds[t][a] > log.rounds[t][b];
      return spec.tie_rule == TieRule::kLowestIdWins ? a < b : a > b;
    });
    for (int j : opp_ids) {
      r.opp_bids.push_back(log.rounds[t][j]);
      // First-price convention: the evaluated player wins ties; otherwise
      // the auction's tie rule decides.
      bool opp_wins = false;
      if (mechanism_ != Mechanism::kFirstPrice) {
        opp_wins = spec.tie_rule == TieRule::kLowestIdWins ? j < player : j > player;
      }
      r.opp_wins_tie.push_back(opp_wins);
    }

    r.ctr_at_rank.assign(static_cast<std::size_t>(n), 0.0);
    r.pay_at_rank.assign(static_cast<std::size_t>(n), 0.0);
    const int num_seated = std::min(n, spec.num_slots());
    for (int rank = 0; rank < num_seated; ++rank) {
      r.ctr_at_rank[rank] = spec.ctrs[rank];
      switch (mechanism_) {
        case Mechanism::kFirstPrice:
          break;  // payment equals the candidate bid; handled in lookup
        case Mechanism::kGsp:
          r.pay_at_rank[rank] =
              spec.ctrs[rank] * (rank < n - 1 ? r.opp_bids[rank] : 0.0);
          break;
        case Mechanism::kVcg: {
          // Occupant of slot k (k > rank) is the opponent at index k-1.
          double total = 0.0;
          for (int k = rank + 1; k < num_seated; ++k)
            total += (spec.ctrs[k - 1] - spec.ctrs[k]) * r.opp_bids[k - 1];
          if (num_seated < n) total += spec.ctrs[num_seated - 1] * r.opp_bids[num_seated - 1];
          r.pay_at_rank[rank] = total;
          break;
        }
      }
    }
    rounds_.push_back(std::move(r));

    const int rank = rank_of(rounds_.back(), log.rounds[t][player]);
    emp_ctr_sum += rounds_.back().ctr_at_rank[rank];
    emp_pay_sum += mechanism_ == Mechanism::kFirstPrice
                       ? (rank == 0 ? log.rounds[t][player] : 0.0)
                       : rounds_.back().pay_at_rank[rank];
  }
  emp_ctr_ = emp_ctr_sum / num_rounds_;
  emp_pay_ = emp_pay_sum / num_rounds_;
}

int BidReplay::rank_of(const Round& r, double b) const {
  int rank = 0;
  for (std::size_t j = 0; j < r.opp_bids.size(); ++j) {
    if (r.opp_bids[j] > b || (r.opp_bids[j] == b && r.opp_wins_tie[j])) ++rank;
  }
  return rank;
}

void BidReplay::lookup(double b, double* out_ctr, double* out_payment) const {
  double ctr_sum = 0.0;
  double pay_sum = 0.0;
  for (const Round& r : rounds_) {
    const int rank = rank_of(r, b);
    ctr_sum += r.ctr_at_rank[rank];
    pay_sum += mechanism_ == Mechanism::kFirstPrice ? (rank == 0 ? b : 0.0)
                                                    : r.pay_at_rank[rank];
  }
  if (out_ctr) *out_ctr = ctr_sum / num_rounds_;
  if (out_payment) *out_payment = pay_sum / num_rounds_;
}

double BidReplay::avg_ctr(double b) const {
  double ctr = 0.0;
  lookup(b, &ctr, nullptr);
  return ctr;
}

double BidReplay::avg_payment(double b) const {
  double pay = 0.0;
  lookup(b, nullptr, &pay);
  return pay;
}

double eq_vcg_average_bid(const BidLog& log, const std::string& player) {
  log.validate();
  const int p = log.player_index(player);
  if (p < 0) throw validation_error("average bid: unknown player '" + player + "'");
  std::vector<double> bids(static_cast<std::size_t>(log.num_rounds()));
  for (int t = 0; t < log.num_rounds(); ++t) bids[static_cast<std::size_t>(t)] = log.rounds[t][p];
  return mean(bids);
}

namespace detail {

// Deduced value of the occupant of position s (s >= 1) in the lowest
// symmetric equilibrium: the adjacent indifference solved for the value.
static double adjacent_value(std::span<const double> bids, std::span<const double> ctrs,
                             int s) {
  const double b_s = bids[s];
  const double b_next = s + 1 < static_cast<int>(bids.size()) ? bids[s + 1] : 0.0;
  return (ctrs[s - 1] * b_s - ctrs[s] * b_next) / (ctrs[s - 1] - ctrs[s]);
}

std::vector<double> invert_lowest_sne(std::span<const double> sorted_bids,
                                      std::span<const double> ctrs) {
  const int n = static_cast<int>(sorted_bids.size());
  const int num_seated = std::min<int>(n, static_cast<int>(ctrs.size()));
  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  for (int s = 1; s < num_seated; ++s) values[s] = adjacent_value(sorted_bids, ctrs, s);
  // The top bid is not pinned down by the equilibrium; use the smallest value
  // consistent with the constraints plus no overbidding.
  values[0] = num_seated >= 2 ? std::max(sorted_bids[0], values[1]) : sorted_bids[0];
  for (int s = num_seated; s < n; ++s) values[s] = sorted_bids[s];
  return values;
}

bool sne_consistent(std::span<const double> sorted_bids, std::span<const double> ctrs,
                    double tol) {
  const int n = static_cast<int>(sorted_bids.size());
  const int num_seated = std::min<int>(n, static_cast<int>(ctrs.size()));
  for (int s = 1; s + 1 < num_seated; ++s) {
    if (adjacent_value(sorted_bids, ctrs, s) + tol < adjacent_value(sorted_bids, ctrs, s + 1))
      return false;
  }
  return true;
}

bool project_to_sne(std::span<const double> sorted_bids, std::span<const double> ctrs,
                    std::vector<double>* projected, double tol, int max_sweeps) {
  const int n = static_cast<int>(sorted_bids.size());
  const int num_seated = std::min<int>(n, static_cast<int>(ctrs.size()));

  // Linear constraints row * x >= 0.
  std::vector<std::vector<double>> rows;
  for (int s = 1; s + 1 < num_seated; ++s) {
    // adjacent_value(s) - adjacent_value(s+1) >= 0, expanded over x.
    std::vector<double> row(static_cast<std::size_t>(n), 0.0);
    const double d1 = ctrs[s - 1] - ctrs[s];
    const double d2 = ctrs[s] - ctrs[s + 1];
    row[s] += ctrs[s - 1] / d1;
    if (s + 1 < n) row[s + 1] -= ctrs[s] / d1;
    if (s + 1 < n) row[s + 1] -= ctrs[s] / d2;
    if (s + 2 < n) row[s + 2] += ctrs[s + 1] / d2;
    rows.push_back(std::move(row));
  }
  for (int i = 0; i + 1 < n; ++i) {  // keep the observed bid ordering
    std::vector<double> row(static_cast<std::size_t>(n), 0.0);
    row[i] = 1.0;
    row[i + 1] = -1.0;
    rows.push_back(std::move(row));
  }
  {
    std::vector<double> row(static_cast<std::size_t>(n), 0.0);
    row[n - 1] = 1.0;  // bids stay nonnegative
    rows.push_back(std::move(row));
  }

  std::vector<double> norms(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double q = 0.0;
    for (double v : rows[r]) q += v * v;
    norms[r] = q;
  }

  std::vector<double> x(sorted_bids.begin(), sorted_bids.end());
  std::vector<double> lambda(rows.size(), 0.0);

  // Hildreth dual coordinate descent on min ||x - b||^2 s.t. rows * x >= 0.
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += rows[r][i] * x[i];
      const double step = std::max(-lambda[r], -dot / norms[r]);
      if (step != 0.0) {
        lambda[r] += step;
        for (int i = 0; i < n; ++i) x[i] += step * rows[r][i];
      }
    }
    double worst = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += rows[r][i] * x[i];
      worst = std::min(worst, dot);
    }
    if (worst >= -tol) {
      *projected = std::move(x);
      return true;
    }
  }
  return false;
}

}  // namespace detail

std::vector<Eq1Estimate> eq1_lowest_sne(const BidLog& log, const AuctionSpec& spec,
                                    double lo, double hi) {
  log.validate();
  spec.validate();
  if (spec.mechanism != Mechanism::kGsp)
    throw validation_error("eq1: requires a GSP auction spec");
  if (log.num_players() != spec.n_players)
    throw validation_error("eq1: log/spec player count mismatch");

  const int n = log.num_players();
  std::vector<std::vector<double>> deduced(static_cast<std::size_t>(n));
  int skipped = 0;

  for (int t = 0; t < log.num_rounds(); ++t) {
    const auto order = sorted_order(log.rounds[t], spec.tie_rule);
    std::vector<double> sorted_bids(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) sorted_bids[s] = log.rounds[t][order[s]];

    if (!detail::sne_consistent(sorted_bids, spec.ctrs, 1e-9)) {
      std::vector<double> projected;
      if (!detail::project_to_sne(sorted_bids, spec.ctrs, &projected)) {
        ++skipped;
        continue;
      }
      sorted_bids = std::move(projected);
    }
    const auto values = detail::invert_lowest_sne(sorted_bids, spec.ctrs);
    for (int s = 0; s < n; ++s)
      deduced[static_cast<std::size_t>(order[s])].push_back(values[s]);
  }

  std::vector<Eq1Estimate> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    Eq1Estimate e;
    e.player_id = log.player_ids[static_cast<std::size_t>(p)];
    e.rounds_used = static_cast<int>(deduced[static_cast<std::size_t>(p)].size());
    e.rounds_skipped = skipped;
    e.failed = skipped * 2 > log.num_rounds();
    e.estimate = e.rounds_used == 0
                     ? (lo + hi) / 2.0
                     : std::clamp(mean(deduced[static_cast<std::size_t>(p)]), lo, hi);
    out.push_back(std::move(e));
  }
  return out;
}

double eq2_best_response(const BidLog& log, const AuctionSpec& spec,
                         const std::string& player, const ValueGrid& grid,
                         std::span<const double> bid_candidates) {
  if (spec.mechanism != Mechanism::kGsp)
    throw validation_error("eq2: requires a GSP auction spec");
  grid.validate();
  if (bid_candidates.empty()) throw validation_error("eq2: empty bid candidate set");
  const int p = log.player_index(player);
  if (p < 0) throw validation_error("eq2: unknown player '" + player + "'");

  std::vector<double> candidates(bid_candidates.begin(), bid_candidates.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  const BidReplay replay(log, spec, p);
  std::vector<double> q(candidates.size()), te(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c)
    replay.lookup(candidates[c], &q[c], &te[c]);

  const double mean_bid = eq_vcg_average_bid(log, player);

  double best_value = grid.points.front();
  double best_gap = std::numeric_limits<double>::infinity();
  for (double v : grid.points) {
    // Best response to the empirical opponent-bid distribution; ties toward
    // the smallest bid.
    std::size_t best_c = 0;
    double best_u = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double u = q[c] * v - te[c];
      if (u > best_u) {
        best_u = u;
        best_c = c;
      }
    }
    const double gap = std::abs(candidates[best_c] - mean_bid);
    if (gap < best_gap) {
      best_gap = gap;
      best_value = v;
    }
  }
  return best_value;
}

}  // namespace qregret
