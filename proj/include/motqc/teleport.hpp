// teleport.hpp
//
// Forced-measurement teleportation and braids built from three forced
// measurements on a quad (c1, r, r', c2) with (r, r') the resource pair.
#ifndef MOTQC_TELEPORT_HPP
#define MOTQC_TELEPORT_HPP

#include <array>
#include <string_view>
#include <vector>

#include "motqc/measurement.hpp"

namespace motqc {

inline constexpr int kDefaultMaxAttempts = 1000;

struct MeasurementRecord {
  /// e1, f1, ..., en, fn with e1 = fn = 0.
  std::vector<Charge> outcomes;
  int attempts = 0;
  LeafPair target_pair;
  LeafPair recovery_pair;
  double trajectory_probability = 1.0;
  /// e^{i phi_M}: the state relative to the ideal teleportation of the input.
  Complex phase{1.0, 0.0};
  /// Every projective measurement performed, in order (e1 is not measured).
  std::vector<MeasurementOutcome> measurements;
};

struct ForcedResult {
  StateVector state;
  MeasurementRecord record;
};

/// Alternates target/recovery measurements until the target pair yields the
/// vacuum. The recovery pair must start in a definite vacuum channel, and the
/// two pairs must share exactly one leaf.
ForcedResult forced_measurement(const StateVector& state, LeafPair target, LeafPair recovery, Rng& rng,
                                int max_attempts = kDefaultMaxAttempts, Routing routing = kDefaultRouting);

/// Same procedure with the outcome string M given instead of sampled.
ForcedResult replay_forced_measurement(const StateVector& state, LeafPair target, LeafPair recovery,
                                       const std::vector<Charge>& outcomes, Routing routing = kDefaultRouting);

/// The deterministic teleportation map applied to `state`: the target pair
/// ends in the vacuum and the information carried by the target-only leaf
/// moves to the recovery-only leaf. Used as the phase reference.
StateVector ideal_teleport(const StateVector& state, LeafPair target, LeafPair recovery,
                           Routing routing = kDefaultRouting);

/// <n> upper bound d_a^2.
double expected_attempt_bound(const AnyonModel& model, Charge a);
/// (1 - d_a^-2)^N
double failure_tail_probability(const AnyonModel& model, Charge a, int attempts);
/// Prob(f = 0 | e) = d_e / d_a^2
double success_probability(const AnyonModel& model, Charge a, Charge e);
/// Exact mean attempt count from e1 = 0: the recovery outcomes form a Markov
/// chain with Prob(f|e) = |[F^{a abar a}_a]_{ef}|^2 and Prob(e'|f) = |[F^{a abar a}_a]_{e'f}|^2.
double expected_attempts(const AnyonModel& model, Charge a);

enum class BraidDirection { positive, inverse };
std::string_view to_string(BraidDirection d);

using Quad = std::array<int, 4>;

struct BraidRecord {
  std::array<MeasurementRecord, 3> steps;
  BraidDirection direction = BraidDirection::positive;
  /// Phase of the result relative to the direct braid of leaves quad[0], quad[3].
  Complex extracted_phase{1.0, 0.0};
  /// Fixed phase of the all-first-attempt trajectory relative to the direct
  /// braid: extracted_phase = isotopy.factor * product of the step phases.
  DiagramIsotopyNote isotopy;
};

struct BraidResult {
  StateVector state;
  BraidRecord record;
};

/// The (target, recovery) pairs of the three forced measurements, in execution
/// order, for roles quad = (1, 2, 3, 4).
std::array<std::pair<LeafPair, LeafPair>, 3> braid_measurement_pairs(const Quad& quad, BraidDirection direction);

/// Chirality of the exchange produced by the measurement sequence of
/// `direction`. Carrying the (2,4) line over leaf 3 mirrors the exchange.
BraidDirection realized_direction(BraidDirection direction, Routing routing);

/// Three forced measurements on the contiguous quad; leaves quad[1], quad[2]
/// hold the resource pair. The result is compared against direct_exchange.
BraidResult measurement_braid(const StateVector& state, const Quad& quad, BraidDirection direction, Rng& rng,
                              int max_attempts = kDefaultMaxAttempts, Routing routing = kDefaultRouting);

/// Same with the three outcome strings given.
BraidResult replay_measurement_braid(const StateVector& state, const Quad& quad, BraidDirection direction,
                                     const std::array<std::vector<Charge>, 3>& outcomes,
                                     Routing routing = kDefaultRouting);

/// The three forced measurements for arbitrary role leaves, without the
/// comparison; extracted_phase and isotopy are left for the caller.
BraidResult measurement_braid_steps(const StateVector& state, const Quad& roles, BraidDirection direction, Rng& rng,
                                    int max_attempts = kDefaultMaxAttempts, Routing routing = kDefaultRouting);

/// Exchange of leaves quad[0] and quad[3] by direct braiding, carried past the
/// resource pair in between. The verification oracle for measurement_braid.
StateVector direct_exchange(const StateVector& state, const Quad& quad, BraidDirection direction);

/// Fills extracted_phase against `reference` and the curl factor for an
/// exchange of chirality `realized` of lines carrying charge a.
void finish_braid_record(BraidRecord& record, const StateVector& reference, const StateVector& result,
                         Charge a, BraidDirection realized);

/// Global phase u with s2 = u s1. Throws NotPhaseEquivalent when
/// |<s1|s2>| < 1 - tolerance.
Complex relative_phase(const StateVector& s1, const StateVector& s2, double tolerance = 1e-6);

/// |<s1|s2>|
double fidelity(const StateVector& s1, const StateVector& s2);

}  // namespace motqc

#endif  // MOTQC_TELEPORT_HPP
