#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qregret/matrix2x2.hpp"
#include "qregret/types.hpp"

namespace qregret {

// Deterministic RNG with fully specified mappings so logs reproduce across
// platforms: mt19937_64 (standard-pinned sequence), 53-bit uniform doubles,
// modulo index draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(gen_() % n);
  }

  // Draws an index proportional to the (nonnegative) weights.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 gen_;
};

// splitmix64 step; combines seeds into independent per-agent streams.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

enum class AgentKind {
  kExpWeights,          // exponential-weights learner over the bid grid
  kTruthful,            // bids its value every round (auctions only)
  kFixedBid,            // constant bid / constant action
  kUniformRandom,       // uniform over the action set
  kEpsilonBestResponse  // best response to last round, epsilon-random
};

std::string agent_kind_name(AgentKind kind);
AgentKind agent_kind_from_name(const std::string& name);

struct AgentSpec {
  std::string id;
  AgentKind kind = AgentKind::kTruthful;
  double true_value = 0.0;
  double learning_rate = 0.0;  // EXP_WEIGHTS only, > 0
  double fixed_bid = 0.0;      // FIXED_BID only
  double epsilon = 0.0;        // EPSILON_BEST_RESPONSE only, in [0, 1]
  std::uint64_t seed = 0;      // per-agent stream salt

  void validate() const;
};

// Action set for auction agents.
struct BidGridSpec {
  double lower = 0.0;
  double upper = 60.0;
  double step = 1.0;
};

// Plays `rounds` auctions and logs every bid. Agents are sorted by id first
// (the log's canonical order); identical inputs give identical logs.
BidLog simulate_auction(std::span<const AgentSpec> agents, const AuctionSpec& spec,
                        int rounds, std::uint64_t seed, const BidGridSpec& bid_grid = {});

// Two agents (row first) repeatedly play the fully specified 2x2 game;
// returns the joint empirical frequency table.
Freq2x2 simulate_game2x2(std::span<const AgentSpec> agents, const GameSpec2x2& spec,
                         int rounds, std::uint64_t seed);

// Eight agents (4 row then 4 col), re-matched uniformly at random each
// period; every player accumulates its own frequency table.
Session2x2 simulate_session2x2(std::span<const AgentSpec> agents, const GameSpec2x2& spec,
                               int rounds, std::uint64_t seed, const std::string& game_id,
                               const std::string& session_id);

}  // namespace qregret
