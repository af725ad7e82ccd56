#include "qregret/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qregret {

namespace {
constexpr double kSumTol = 1e-9;
constexpr double kUpperSnapTol = 1e-9;
}  // namespace

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw internal_error("format_double: value not representable");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string& what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw validation_error(what + ": not a number: '" + std::string(text) + "'");
  return value;
}

long long parse_int(std::string_view text, const std::string& what) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw validation_error(what + ": not an integer: '" + std::string(text) + "'");
  return value;
}

double ValueGrid::step() const {
  if (points.size() < 2) return 0.0;
  return points[1] - points[0];
}

void ValueGrid::validate() const {
  if (points.empty()) throw validation_error("grid: must have at least one point");
  if (prior.size() != points.size())
    throw validation_error("grid: prior length does not match points length");
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i] < points[i + 1]))
      throw validation_error("grid: points must be strictly ascending");
  }
  double total = 0.0;
  for (double w : prior) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw validation_error("grid: prior weights must be nonnegative and finite");
    total += w;
  }
  if (!nearly_equal(total, 1.0, kSumTol))
    throw validation_error("grid: prior weights sum to " + format_double(total) + ", expected 1");
  for (double p : points) {
    if (!std::isfinite(p)) throw validation_error("grid: points must be finite");
  }
}

bool ValueGrid::same_points(const ValueGrid& other) const {
  return points == other.points;
}

ValueGrid make_uniform_grid(double lower, double upper, double step) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !std::isfinite(step))
    throw validation_error("grid: bounds and step must be finite");
  if (!(lower < upper)) throw validation_error("grid: lower must be below upper");
  if (!(step > 0.0)) throw validation_error("grid: step must be positive");

  ValueGrid grid;
  for (std::size_t k = 0;; ++k) {
    double x = lower + static_cast<double>(k) * step;
    if (x > upper + kUpperSnapTol) break;
    if (std::abs(x - upper) <= kUpperSnapTol) x = upper;
    grid.points.push_back(x);
    if (x == upper) break;
  }
  const double w = 1.0 / static_cast<double>(grid.points.size());
  grid.prior.assign(grid.points.size(), w);
  grid.validate();
  return grid;
}

ValueGrid make_grid_with_prior(std::vector<double> points, std::vector<double> prior) {
  ValueGrid grid;
  grid.points = std::move(points);
  grid.prior = std::move(prior);
  grid.validate();
  return grid;
}

Freq2x2 Freq2x2::transposed() const {
  // Role swap: the column player's Left/Right become the new row player's
  // Up/Down, so UR and DL trade places.
  Freq2x2 t = *this;
  std::swap(t.f_ur, t.f_dl);
  return t;
}

Freq2x2 validate_freq(const Freq2x2& freq) {
  const std::array<std::pair<const char*, double>, 4> fields = {{
      {"f_UL", freq.f_ul}, {"f_UR", freq.f_ur}, {"f_DL", freq.f_dl}, {"f_DR", freq.f_dr}}};
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value))
      throw validation_error(std::string("freq: ") + name + " is not finite");
    if (value < 0.0)
      throw validation_error(std::string("freq: ") + name + " is negative (" +
                             format_double(value) + ")");
    if (value > 1.0)
      throw validation_error(std::string("freq: ") + name + " exceeds 1 (" +
                             format_double(value) + ")");
  }
  const double total = freq.f_ul + freq.f_ur + freq.f_dl + freq.f_dr;
  if (!nearly_equal(total, 1.0, kSumTol))
    throw validation_error("freq: frequencies sum to " + format_double(total) + ", expected 1");
  if (freq.periods < 1) throw validation_error("freq: periods must be positive");
  return freq;
}

std::string role_name(PlayerRole role) { return role == PlayerRole::kRow ? "row" : "col"; }

PlayerRole role_from_name(const std::string& name) {
  if (name == "row") return PlayerRole::kRow;
  if (name == "col" || name == "column") return PlayerRole::kCol;
  throw validation_error("role: unknown role '" + name + "' (expected row|col)");
}

PlayerRole slot_role(Slot slot) {
  switch (slot) {
    case Slot::kRowUL: case Slot::kRowUR: case Slot::kRowDL: case Slot::kRowDR:
      return PlayerRole::kRow;
    default:
      return PlayerRole::kCol;
  }
}

std::string slot_name(Slot slot) {
  switch (slot) {
    case Slot::kRowUL: return "row_UL";
    case Slot::kRowUR: return "row_UR";
    case Slot::kRowDL: return "row_DL";
    case Slot::kRowDR: return "row_DR";
    case Slot::kColUL: return "col_UL";
    case Slot::kColUR: return "col_UR";
    case Slot::kColDL: return "col_DL";
    case Slot::kColDR: return "col_DR";
  }
  throw internal_error("slot_name: bad slot");
}

Slot slot_from_name(const std::string& name) {
  for (Slot s : kAllSlots) {
    if (slot_name(s) == name) return s;
  }
  throw validation_error("slot: unknown slot '" + name + "'");
}

namespace {
int cell_index(Slot slot) {
  switch (slot) {
    case Slot::kRowUL: case Slot::kColUL: return 0;
    case Slot::kRowUR: case Slot::kColUR: return 1;
    case Slot::kRowDL: case Slot::kColDL: return 2;
    case Slot::kRowDR: case Slot::kColDR: return 3;
  }
  throw internal_error("cell_index: bad slot");
}
}  // namespace

std::optional<double> GameSpec2x2::payoff(Slot slot) const {
  const auto& side = slot_role(slot) == PlayerRole::kRow ? row_payoffs : col_payoffs;
  return side[cell_index(slot)];
}

void GameSpec2x2::set_payoff(Slot slot, std::optional<double> value) {
  auto& side = slot_role(slot) == PlayerRole::kRow ? row_payoffs : col_payoffs;
  side[cell_index(slot)] = value;
}

std::vector<Slot> GameSpec2x2::hidden_slots() const {
  std::vector<Slot> hidden;
  for (Slot s : kAllSlots) {
    if (is_hidden(s)) hidden.push_back(s);
  }
  return hidden;
}

std::vector<Slot> GameSpec2x2::hidden_slots(PlayerRole role) const {
  std::vector<Slot> hidden;
  for (Slot s : kAllSlots) {
    if (slot_role(s) == role && is_hidden(s)) hidden.push_back(s);
  }
  return hidden;
}

Slot transposed_slot(Slot slot) {
  switch (slot) {
    case Slot::kRowUL: return Slot::kColUL;
    case Slot::kRowUR: return Slot::kColDL;
    case Slot::kRowDL: return Slot::kColUR;
    case Slot::kRowDR: return Slot::kColDR;
    case Slot::kColUL: return Slot::kRowUL;
    case Slot::kColUR: return Slot::kRowDL;
    case Slot::kColDL: return Slot::kRowUR;
    case Slot::kColDR: return Slot::kRowDR;
  }
  throw internal_error("transposed_slot: bad slot");
}

GameSpec2x2 GameSpec2x2::transposed() const {
  GameSpec2x2 t;
  t.constant_sum = constant_sum;
  for (Slot s : kAllSlots) t.set_payoff(transposed_slot(s), payoff(s));
  return t;
}

void GameSpec2x2::validate() const {
  for (Slot s : kAllSlots) {
    auto v = payoff(s);
    if (v && !std::isfinite(*v))
      throw validation_error("game: payoff " + slot_name(s) + " is not finite");
  }
  if (constant_sum) {
    if (!std::isfinite(*constant_sum))
      throw validation_error("game: constant_sum is not finite");
    static constexpr std::array<std::pair<Slot, Slot>, 4> cells = {{
        {Slot::kRowUL, Slot::kColUL},
        {Slot::kRowUR, Slot::kColUR},
        {Slot::kRowDL, Slot::kColDL},
        {Slot::kRowDR, Slot::kColDR}}};
    for (const auto& [r, c] : cells) {
      auto rv = payoff(r), cv = payoff(c);
      if (rv && cv && !nearly_equal(*rv + *cv, *constant_sum, 1e-9))
        throw validation_error("game: cell " + slot_name(r) + "/" + slot_name(c) +
                               " sums to " + format_double(*rv + *cv) +
                               ", expected constant_sum " + format_double(*constant_sum));
    }
  }
}

int BidLog::player_index(const std::string& id) const {
  for (std::size_t i = 0; i < player_ids.size(); ++i) {
    if (player_ids[i] == id) return static_cast<int>(i);
  }
  return -1;
}

void BidLog::validate() const {
  if (player_ids.empty()) throw validation_error("bidlog: no players");
  if (rounds.empty()) throw validation_error("bidlog: no rounds (need T >= 1)");
  for (std::size_t i = 0; i + 1 < player_ids.size(); ++i) {
    if (player_ids[i] == player_ids[i + 1])
      throw validation_error("bidlog: duplicate player id '" + player_ids[i] + "'");
    if (player_ids[i] > player_ids[i + 1])
      throw validation_error("bidlog: player ids must be in ascending order (tie-breaking "
                             "depends on it)");
  }
  for (std::size_t t = 0; t < rounds.size(); ++t) {
    if (rounds[t].size() != player_ids.size())
      throw validation_error("bidlog: round " + std::to_string(t + 1) + " has " +
                             std::to_string(rounds[t].size()) + " bids, expected " +
                             std::to_string(player_ids.size()));
    for (double b : rounds[t]) {
      if (!std::isfinite(b) || b < 0.0)
        throw validation_error("bidlog: round " + std::to_string(t + 1) +
                               " contains a negative or non-finite bid");
    }
  }
}

BidLog BidLog::second_half() const {
  BidLog half;
  half.player_ids = player_ids;
  const std::size_t start = rounds.size() / 2;
  half.rounds.assign(rounds.begin() + static_cast<std::ptrdiff_t>(start), rounds.end());
  return half;
}

std::string mechanism_name(Mechanism mech) {
  switch (mech) {
    case Mechanism::kFirstPrice: return "FIRST_PRICE";
    case Mechanism::kGsp: return "GSP";
    case Mechanism::kVcg: return "VCG";
  }
  throw internal_error("mechanism_name: bad mechanism");
}

Mechanism mechanism_from_name(const std::string& name) {
  if (name == "FIRST_PRICE" || name == "first_price") return Mechanism::kFirstPrice;
  if (name == "GSP" || name == "gsp") return Mechanism::kGsp;
  if (name == "VCG" || name == "vcg") return Mechanism::kVcg;
  throw validation_error("auction: unknown mechanism '" + name + "'");
}

std::string tie_rule_name(TieRule rule) {
  return rule == TieRule::kLowestIdWins ? "lowest_id" : "highest_id";
}

TieRule tie_rule_from_name(const std::string& name) {
  if (name == "lowest_id") return TieRule::kLowestIdWins;
  if (name == "highest_id") return TieRule::kHighestIdWins;
  throw validation_error("auction: unknown tie rule '" + name + "'");
}

void AuctionSpec::validate() const {
  if (n_players < 1) throw validation_error("auction: n_players must be positive");
  if (ctrs.empty()) throw validation_error("auction: need at least one slot");
  for (double c : ctrs) {
    if (!(c > 0.0) || c > 1.0 || !std::isfinite(c))
      throw validation_error("auction: ctrs must lie in (0, 1]");
  }
  for (std::size_t i = 0; i + 1 < ctrs.size(); ++i) {
    if (!(ctrs[i] > ctrs[i + 1]))
      throw validation_error("auction: ctrs must be strictly descending");
  }
  if (mechanism == Mechanism::kFirstPrice) {
    if (ctrs.size() != 1 || ctrs[0] != 1.0)
      throw validation_error("auction: FIRST_PRICE requires a single slot with ctr 1");
  }
}

}  // namespace qregret
