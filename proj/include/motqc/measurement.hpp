// measurement.hpp
#ifndef MOTQC_MEASUREMENT_HPP
#define MOTQC_MEASUREMENT_HPP

#include <map>
#include <string_view>

#include "motqc/fusion_space.hpp"
#include "motqc/rng.hpp"

namespace motqc {

/// How the charge line of leaf j is brought next to leaf i when measuring a
/// non-adjacent pair (i, j): passing over or under the leaves in between.
enum class Routing { over, under };

/// Carrying leaf j under the leaves in between is the convention under which
/// three forced measurements reproduce the direct exchange of the outer leaves.
inline constexpr Routing kDefaultRouting = Routing::under;

std::string_view to_string(Routing r);
Routing parse_routing(std::string_view s);

/// Outcomes with Born probability below this are treated as impossible.
inline constexpr double kProbabilityFloor = 1e-12;

struct LeafPair {
  int first = 0;
  int second = 0;
  friend bool operator==(const LeafPair&, const LeafPair&) = default;
};

struct MeasurementOutcome {
  LeafPair pair;
  Charge charge;
  double probability = 0.0;
  Routing routing = kDefaultRouting;
};

/// Probability of every charge of the model (zeros included).
using ChargeDistribution = std::map<Charge, double>;

ChargeDistribution pair_charge_distribution(const StateVector& state, int i, int j, Routing routing = kDefaultRouting);

struct Projection {
  StateVector state;
  double probability;
};
/// Born-rule projection onto pair charge c, renormalized.
/// Throws ZeroProbabilityOutcome when Prob(c) < kProbabilityFloor.
Projection project_pair(const StateVector& state, int i, int j, Charge c, Routing routing = kDefaultRouting);

struct Sample {
  MeasurementOutcome outcome;
  StateVector state;
};
Sample sample_measurement(const StateVector& state, int i, int j, Rng& rng, Routing routing = kDefaultRouting);

/// Braid sign used to carry a line leftwards with the given routing.
int transport_sign(Routing routing);

}  // namespace motqc

#endif  // MOTQC_MEASUREMENT_HPP
