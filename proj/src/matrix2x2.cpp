#include "qregret/matrix2x2.hpp"

#include <algorithm>
#include <cmath>

namespace qregret {

namespace {

constexpr double kDegenerateTol = 1e-12;

// The other role's payoff in the same cell (RowUL <-> ColUL, ...).
Slot cell_partner(Slot slot) {
  switch (slot) {
    case Slot::kRowUL: return Slot::kColUL;
    case Slot::kRowUR: return Slot::kColUR;
    case Slot::kRowDL: return Slot::kColDL;
    case Slot::kRowDR: return Slot::kColDR;
    case Slot::kColUL: return Slot::kRowUL;
    case Slot::kColUR: return Slot::kRowUR;
    case Slot::kColDL: return Slot::kRowDL;
    case Slot::kColDR: return Slot::kRowDR;
  }
  throw internal_error("cell_partner: bad slot");
}

double require_payoff(const GameSpec2x2& spec, Slot slot, const char* who) {
  const auto v = spec.payoff(slot);
  if (!v)
    throw task_error(std::string(who) + ": payoff " + slot_name(slot) +
                     " must be known for this estimate");
  return *v;
}

}  // namespace

void Session2x2::validate() const {
  int rows = 0, cols = 0;
  for (const PlayerFreq& p : players) {
    validate_freq(p.freq);
    (p.role == PlayerRole::kRow ? rows : cols) += 1;
  }
  if (rows != 4 || cols != 4)
    throw validation_error("session " + session_id + ": expected 4 row and 4 column players, got " +
                           std::to_string(rows) + " row / " + std::to_string(cols) + " column");
}

std::string aggregation_level_name(AggregationLevel level) {
  switch (level) {
    case AggregationLevel::kGame: return "game";
    case AggregationLevel::kSession: return "session";
    case AggregationLevel::kFineGrained: return "fine_grained";
    case AggregationLevel::kPlayer: return "player";
    case AggregationLevel::kConstantSumSession: return "constant_sum_session";
  }
  throw internal_error("aggregation_level_name: bad level");
}

AggregationLevel aggregation_level_from_name(const std::string& name) {
  if (name == "game") return AggregationLevel::kGame;
  if (name == "session") return AggregationLevel::kSession;
  if (name == "fine_grained" || name == "fine-grained") return AggregationLevel::kFineGrained;
  if (name == "player") return AggregationLevel::kPlayer;
  if (name == "constant_sum_session" || name == "constant-sum")
    return AggregationLevel::kConstantSumSession;
  throw validation_error("level: unknown aggregation level '" + name + "'");
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kQr: return "qr";
    case Method::kMr: return "mr";
    case Method::kMrRel: return "mr_rel";
    case Method::kEq: return "eq";
  }
  throw internal_error("method_name: bad method");
}

Method method_from_name(const std::string& name) {
  if (name == "qr") return Method::kQr;
  if (name == "mr") return Method::kMr;
  if (name == "mr_rel" || name == "mr-rel") return Method::kMrRel;
  if (name == "eq") return Method::kEq;
  throw validation_error("method: unknown method '" + name + "'");
}

Freq2x2 mean_freq(std::span<const Freq2x2> tables) {
  if (tables.empty()) throw validation_error("mean_freq: no tables");
  Freq2x2 out;
  out.periods = 0;
  std::vector<double> ul, ur, dl, dr;
  for (const Freq2x2& f : tables) {
    validate_freq(f);
    ul.push_back(f.f_ul);
    ur.push_back(f.f_ur);
    dl.push_back(f.f_dl);
    dr.push_back(f.f_dr);
    out.periods += f.periods;
  }
  const double n = static_cast<double>(tables.size());
  out.f_ul = pairwise_sum(ul) / n;
  out.f_ur = pairwise_sum(ur) / n;
  out.f_dl = pairwise_sum(dl) / n;
  out.f_dr = pairwise_sum(dr) / n;
  return out;
}

Freq2x2 aggregate_session(const Session2x2& session) {
  session.validate();
  std::vector<Freq2x2> tables;
  tables.reserve(session.players.size());
  for (const PlayerFreq& p : session.players) tables.push_back(p.freq);
  return mean_freq(tables);
}

double nash_inversion_2x2(const GameSpec2x2& spec, Slot hidden, const Freq2x2& freq,
                          double lo, double hi, bool* degenerate) {
  validate_freq(freq);
  if (!(lo < hi)) throw validation_error("nash_inversion: empty range");
  if (degenerate) *degenerate = false;

  if (slot_role(hidden) == PlayerRole::kCol) {
    return nash_inversion_2x2(spec.transposed(), transposed_slot(hidden), freq.transposed(),
                              lo, hi, degenerate);
  }

  // Row player indifferent between Up and Down against the column player's
  // empirical marginal q = P(Left):
  //   q*a_UL + (1-q)*a_UR = q*a_DL + (1-q)*a_DR
  const double q = freq.left_marginal();
  double coef = 0.0;
  double rhs = 0.0;
  switch (hidden) {
    case Slot::kRowUL:
      coef = q;
      rhs = q * require_payoff(spec, Slot::kRowDL, "nash_inversion") +
            (1 - q) * require_payoff(spec, Slot::kRowDR, "nash_inversion") -
            (1 - q) * require_payoff(spec, Slot::kRowUR, "nash_inversion");
      break;
    case Slot::kRowUR:
      coef = 1 - q;
      rhs = q * require_payoff(spec, Slot::kRowDL, "nash_inversion") +
            (1 - q) * require_payoff(spec, Slot::kRowDR, "nash_inversion") -
            q * require_payoff(spec, Slot::kRowUL, "nash_inversion");
      break;
    case Slot::kRowDL:
      coef = q;
      rhs = q * require_payoff(spec, Slot::kRowUL, "nash_inversion") +
            (1 - q) * require_payoff(spec, Slot::kRowUR, "nash_inversion") -
            (1 - q) * require_payoff(spec, Slot::kRowDR, "nash_inversion");
      break;
    case Slot::kRowDR:
      coef = 1 - q;
      rhs = q * require_payoff(spec, Slot::kRowUL, "nash_inversion") +
            (1 - q) * require_payoff(spec, Slot::kRowUR, "nash_inversion") -
            q * require_payoff(spec, Slot::kRowDL, "nash_inversion");
      break;
    default:
      throw internal_error("nash_inversion: bad row slot");
  }

  if (std::abs(coef) < kDegenerateTol) {
    if (degenerate) *degenerate = true;
    return (lo + hi) / 2.0;
  }
  return std::clamp(rhs / coef, lo, hi);
}

namespace {

// Column-player regret as a function of the row entry v, with the column
// payoff in the hidden cell pinned to C - v.
RegretCurve col_curve_for_constant_sum(const GameSpec2x2& spec, Slot row_slot,
                                       const Freq2x2& freq, const ValueGrid& grid,
                                       double constant) {
  const Slot partner = cell_partner(row_slot);
  const GameSpec2x2 mirrored = spec.transposed();
  const Slot m_hidden = transposed_slot(partner);
  const Freq2x2 m_freq = freq.transposed();

  static constexpr std::array<Slot, 4> row_slots = {Slot::kRowUL, Slot::kRowUR,
                                                    Slot::kRowDL, Slot::kRowDR};
  std::array<double, 4> payoffs{};
  int hidden_cell = -1;
  for (int c = 0; c < 4; ++c) {
    const Slot s = row_slots[static_cast<std::size_t>(c)];
    if (s == m_hidden) {
      hidden_cell = c;
      continue;
    }
    payoffs[static_cast<std::size_t>(c)] = require_payoff(mirrored, s, "constant_sum curve");
  }
  if (hidden_cell < 0) throw internal_error("constant_sum curve: bad mirror slot");

  RegretCurve curve;
  curve.grid = grid;
  curve.regrets.reserve(grid.size());
  curve.best_fixed.reserve(grid.size());
  for (double v : grid.points) {
    payoffs[static_cast<std::size_t>(hidden_cell)] = constant - v;
    const RowUtilities u = row_utilities_2x2(payoffs, m_freq);
    curve.best_fixed.push_back(std::max(u.up, u.down));
    curve.regrets.push_back(std::max(std::max(u.up, u.down) - u.emp, 0.0));
  }
  return curve;
}

SlotEstimate estimate_from_curves(Slot slot, const std::string& scope,
                                  std::span<const RegretCurve> curves, Method method,
                                  double lambda, std::optional<double> truth) {
  SlotEstimate est;
  est.slot = slot;
  est.scope = scope;
  est.true_value = truth;
  switch (method) {
    case Method::kQr:
      est.estimate = quantal_regret(curves, lambda);
      break;
    case Method::kMr:
      est.estimate = min_regret(curves.size() == 1 ? curves.front() : sum_curves(curves));
      break;
    case Method::kMrRel: {
      const RegretCurve total = curves.size() == 1 ? curves.front() : sum_curves(curves);
      est.estimate = min_relative_regret(total, total.best_fixed);
      break;
    }
    case Method::kEq:
      throw internal_error("estimate_from_curves: EQ has no curve");
  }
  return est;
}

GameSpec2x2 with_hidden(const GameSpec2x2& spec, Slot slot) {
  GameSpec2x2 w = spec;
  w.set_payoff(slot, std::nullopt);
  return w;
}

}  // namespace

std::vector<SlotEstimate> estimate_session(const Session2x2& session, const GameSpec2x2& spec,
                                           AggregationLevel level, Method method,
                                           const ValueGrid& grid, double lambda) {
  session.validate();
  spec.validate();
  grid.validate();
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw validation_error("estimate_session: lambda must be finite and nonnegative");

  const double lo = grid.points.front();
  const double hi = grid.points.back();
  const auto hidden = spec.hidden_slots();

  if (level == AggregationLevel::kConstantSumSession) {
    if (!spec.constant_sum)
      throw task_error("estimate_session: constant-sum level on a game without constant_sum");
    const double constant = *spec.constant_sum;
    if (lo < -1e-9 || hi > constant + 1e-9)
      throw validation_error("estimate_session: constant-sum grid must lie in [0, C]");

    std::vector<Slot> targets;
    if (hidden.empty()) {
      targets = {Slot::kRowUL, Slot::kRowUR, Slot::kRowDL, Slot::kRowDR};
    } else {
      for (Slot s : hidden) {
        const Slot row_side = slot_role(s) == PlayerRole::kRow ? s : cell_partner(s);
        if (std::find(targets.begin(), targets.end(), row_side) == targets.end())
          targets.push_back(row_side);
      }
    }

    const Freq2x2 table = aggregate_session(session);
    std::vector<SlotEstimate> out;
    for (Slot s : targets) {
      GameSpec2x2 w = with_hidden(with_hidden(spec, s), cell_partner(s));
      const auto truth = spec.payoff(s);
      if (method == Method::kEq) {
        bool deg_row = false, deg_col = false;
        const double inv_row = nash_inversion_2x2(w, s, table, 0.0, constant, &deg_row);
        const double inv_col =
            nash_inversion_2x2(w, cell_partner(s), table, 0.0, constant, &deg_col);
        SlotEstimate est;
        est.slot = s;
        est.scope = "session";
        est.true_value = truth;
        est.degenerate = deg_row || deg_col;
        est.estimate = std::clamp((inv_row + (constant - inv_col)) / 2.0, 0.0, constant);
        out.push_back(est);
      } else {
        std::vector<RegretCurve> curves;
        curves.push_back(regret_curve_2x2(w, s, table, grid, "row"));
        curves.push_back(col_curve_for_constant_sum(w, s, table, grid, constant));
        out.push_back(estimate_from_curves(s, "session", curves, method, lambda, truth));
      }
    }
    return out;
  }

  std::vector<Slot> targets;
  if (hidden.empty()) {
    targets.assign(kAllSlots.begin(), kAllSlots.end());
  } else {
    targets = hidden;
  }

  std::vector<SlotEstimate> out;
  const Freq2x2 session_table = aggregate_session(session);

  for (Slot s : targets) {
    const GameSpec2x2 w = with_hidden(spec, s);
    const auto truth = spec.payoff(s);

    switch (level) {
      case AggregationLevel::kGame:
      case AggregationLevel::kSession: {
        if (method == Method::kEq) {
          SlotEstimate est;
          est.slot = s;
          est.scope = "session";
          est.true_value = truth;
          est.estimate = nash_inversion_2x2(w, s, session_table, lo, hi, &est.degenerate);
          out.push_back(est);
        } else {
          const RegretCurve curve = regret_curve_2x2(w, s, session_table, grid);
          out.push_back(estimate_from_curves(s, "session", {&curve, 1}, method, lambda, truth));
        }
        break;
      }
      case AggregationLevel::kFineGrained: {
        if (method == Method::kEq) {
          // The fine-grained split applies to the regret methods; EQ keeps the
          // session table.
          SlotEstimate est;
          est.slot = s;
          est.scope = "session";
          est.true_value = truth;
          est.estimate = nash_inversion_2x2(w, s, session_table, lo, hi, &est.degenerate);
          out.push_back(est);
        } else {
          std::vector<RegretCurve> curves;
          for (const PlayerFreq& p : session.players) {
            if (p.role != slot_role(s)) continue;
            curves.push_back(regret_curve_2x2(w, s, p.freq, grid, p.player_id));
          }
          const double scaled =
              lambda * 3.0 / static_cast<double>(curves.size());
          out.push_back(estimate_from_curves(s, "session", curves, method, scaled, truth));
        }
        break;
      }
      case AggregationLevel::kPlayer: {
        for (const PlayerFreq& p : session.players) {
          if (p.role != slot_role(s)) continue;
          if (method == Method::kEq) {
            SlotEstimate est;
            est.slot = s;
            est.scope = p.player_id;
            est.true_value = truth;
            est.estimate = nash_inversion_2x2(w, s, p.freq, lo, hi, &est.degenerate);
            out.push_back(est);
          } else {
            const RegretCurve curve = regret_curve_2x2(w, s, p.freq, grid, p.player_id);
            out.push_back(
                estimate_from_curves(s, p.player_id, {&curve, 1}, method, lambda, truth));
          }
        }
        break;
      }
      case AggregationLevel::kConstantSumSession:
        throw internal_error("estimate_session: unreachable level");
    }
  }
  return out;
}

std::vector<SlotEstimate> estimate_game(std::span<const Session2x2> sessions,
                                        const GameSpec2x2& spec, Method method,
                                        const ValueGrid& grid, double lambda) {
  if (sessions.empty()) throw validation_error("estimate_game: no sessions");
  std::vector<Freq2x2> tables;
  for (const Session2x2& s : sessions) {
    if (s.game_id != sessions.front().game_id)
      throw validation_error("estimate_game: sessions belong to different games");
    tables.push_back(aggregate_session(s));
  }
  const Freq2x2 pooled = mean_freq(tables);

  Session2x2 pseudo;
  pseudo.game_id = sessions.front().game_id;
  pseudo.session_id = "game";
  for (int i = 0; i < 4; ++i)
    pseudo.players.push_back({"row" + std::to_string(i + 1), PlayerRole::kRow, pooled});
  for (int i = 0; i < 4; ++i)
    pseudo.players.push_back({"col" + std::to_string(i + 1), PlayerRole::kCol, pooled});

  auto out = estimate_session(pseudo, spec, AggregationLevel::kSession, method, grid, lambda);
  for (SlotEstimate& e : out) e.scope = "game";
  return out;
}

}  // namespace qregret
