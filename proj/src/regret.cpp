#include "qregret/regret.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace qregret {

namespace {

// Regret is measured against the best fixed bid. An adaptive empirical
// sequence can genuinely beat every fixed bid (winning only the cheap
// rounds), so negatives of any size are clamped, not rejected.
double finalize_auction_regret(double r) { return std::max(r, 0.0); }

}  // namespace

void RegretCurve::validate() const {
  grid.validate();
  if (regrets.size() != grid.size())
    throw validation_error("curve: regrets length does not match grid");
  if (!best_fixed.empty() && best_fixed.size() != grid.size())
    throw validation_error("curve: best_fixed length does not match grid");
  for (double r : regrets) {
    if (!(r >= 0.0) || !std::isfinite(r))
      throw validation_error("curve: regrets must be finite and nonnegative");
  }
}

RowUtilities row_utilities_2x2(const std::array<double, 4>& row_payoffs, const Freq2x2& freq) {
  const auto& [a_ul, a_ur, a_dl, a_dr] = row_payoffs;
  const double left = freq.left_marginal();
  const double right = freq.f_ur + freq.f_dr;
  RowUtilities u;
  u.up = left * a_ul + right * a_ur;
  u.down = left * a_dl + right * a_dr;
  u.emp = freq.f_ul * a_ul + freq.f_ur * a_ur + freq.f_dl * a_dl + freq.f_dr * a_dr;
  return u;
}

double regret_2x2_row(const std::array<double, 4>& row_payoffs, const Freq2x2& freq) {
  const RowUtilities u = row_utilities_2x2(row_payoffs, freq);
  return std::max(std::max(u.up, u.down) - u.emp, 0.0);
}

RegretCurve regret_curve_2x2(const GameSpec2x2& spec, Slot hidden, const Freq2x2& freq,
                             const ValueGrid& grid, const std::string& player_id) {
  grid.validate();
  validate_freq(freq);
  spec.validate();

  if (slot_role(hidden) == PlayerRole::kCol) {
    GameSpec2x2 mirrored = spec.transposed();
    RegretCurve curve = regret_curve_2x2(mirrored, transposed_slot(hidden),
                                         freq.transposed(), grid, player_id);
    return curve;
  }

  // Row-player curve: the other three row payoffs must be known.
  std::array<double, 4> payoffs{};
  int hidden_cell = -1;
  static constexpr std::array<Slot, 4> row_slots = {Slot::kRowUL, Slot::kRowUR,
                                                    Slot::kRowDL, Slot::kRowDR};
  for (int c = 0; c < 4; ++c) {
    const Slot s = row_slots[static_cast<std::size_t>(c)];
    if (s == hidden) {
      hidden_cell = c;
      continue;
    }
    const auto v = spec.payoff(s);
    if (!v)
      throw task_error("curve: slot " + slot_name(hidden) +
                       " is not the owner's only hidden payoff (" + slot_name(s) +
                       " is also hidden)");
    payoffs[static_cast<std::size_t>(c)] = *v;
  }
  if (hidden_cell < 0) throw internal_error("curve: hidden slot not found");

  RegretCurve curve;
  curve.grid = grid;
  curve.player_id = player_id;
  curve.regrets.reserve(grid.size());
  curve.best_fixed.reserve(grid.size());
  for (double candidate : grid.points) {
    payoffs[static_cast<std::size_t>(hidden_cell)] = candidate;
    const RowUtilities u = row_utilities_2x2(payoffs, freq);
    curve.best_fixed.push_back(std::max(u.up, u.down));
    curve.regrets.push_back(std::max(std::max(u.up, u.down) - u.emp, 0.0));
  }
  return curve;
}

std::vector<double> default_bid_candidates(const BidLog& log, int player,
                                           const ValueGrid& grid) {
  if (player < 0 || player >= log.num_players())
    throw validation_error("candidates: player index out of range");
  const double tick = grid.size() >= 2 ? grid.step() : 1.0;
  std::set<double> cands(grid.points.begin(), grid.points.end());
  cands.insert(0.0);
  for (const auto& round : log.rounds) {
    for (int j = 0; j < log.num_players(); ++j) {
      if (j == player) continue;
      cands.insert(round[static_cast<std::size_t>(j)]);
      cands.insert(round[static_cast<std::size_t>(j)] + tick);
    }
  }
  return {cands.begin(), cands.end()};
}

namespace {

RegretCurve curve_from_replay(const BidReplay& replay, const ValueGrid& grid,
                              std::span<const double> bid_candidates,
                              const std::string& player_id) {
  if (bid_candidates.empty())
    throw validation_error("curve: empty bid candidate set");

  std::vector<double> q(bid_candidates.size()), te(bid_candidates.size());
  for (std::size_t c = 0; c < bid_candidates.size(); ++c)
    replay.lookup(bid_candidates[c], &q[c], &te[c]);

  RegretCurve curve;
  curve.grid = grid;
  curve.player_id = player_id;
  curve.regrets.reserve(grid.size());
  curve.best_fixed.reserve(grid.size());
  for (double theta : grid.points) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < bid_candidates.size(); ++c)
      best = std::max(best, q[c] * theta - te[c]);
    const double emp = replay.empirical_ctr() * theta - replay.empirical_payment();
    curve.best_fixed.push_back(best);
    curve.regrets.push_back(finalize_auction_regret(best - emp));
  }
  return curve;
}

RegretCurve auction_curve(const BidLog& log, const AuctionSpec& spec,
                          const std::string& player, const ValueGrid& grid,
                          std::span<const double> bid_candidates) {
  grid.validate();
  const int p = log.player_index(player);
  if (p < 0) throw validation_error("curve: unknown player '" + player + "'");
  const BidReplay replay(log, spec, p);
  return curve_from_replay(replay, grid, bid_candidates, player);
}

}  // namespace

RegretCurve regret_curve_first_price(const BidLog& log, const AuctionSpec& spec,
                                     const std::string& player, const ValueGrid& grid,
                                     std::span<const double> bid_candidates) {
  if (spec.mechanism != Mechanism::kFirstPrice)
    throw validation_error("curve: expected a FIRST_PRICE auction spec");
  return auction_curve(log, spec, player, grid, bid_candidates);
}

RegretCurve regret_curve_position_auction(const BidLog& log, const AuctionSpec& spec,
                                          const std::string& player, const ValueGrid& grid,
                                          std::span<const double> bid_candidates) {
  if (spec.mechanism == Mechanism::kFirstPrice)
    throw validation_error("curve: expected a GSP or VCG auction spec");
  return auction_curve(log, spec, player, grid, bid_candidates);
}

RegretCurve sum_curves(std::span<const RegretCurve> curves) {
  if (curves.empty()) throw validation_error("sum_curves: no curves");
  RegretCurve total = curves.front();
  for (std::size_t k = 1; k < curves.size(); ++k) {
    const RegretCurve& c = curves[k];
    if (!c.grid.same_points(total.grid))
      throw validation_error("sum_curves: curves use different grids");
    for (std::size_t j = 0; j < total.regrets.size(); ++j) {
      total.regrets[j] += c.regrets[j];
      if (!total.best_fixed.empty() && !c.best_fixed.empty())
        total.best_fixed[j] += c.best_fixed[j];
    }
    if (total.best_fixed.empty() || c.best_fixed.empty()) total.best_fixed.clear();
  }
  return total;
}

}  // namespace qregret
