// teleport.cpp
#include "motqc/teleport.hpp"

#include <cmath>
#include <string>

namespace motqc {
namespace {

int shared_leaf(LeafPair a, LeafPair b) {
  int shared = -1, count = 0;
  for (int x : {a.first, a.second})
    if (x == b.first || x == b.second) {
      shared = x;
      ++count;
    }
  if (count != 1) throw PreconditionViolation("target and recovery pairs must share exactly one leaf");
  return shared;
}

LeafPair ordered(LeafPair p) { return p.first < p.second ? p : LeafPair{p.second, p.first}; }

void require_vacuum(const StateVector& state, LeafPair pair, Routing routing, const char* what) {
  const auto p = ordered(pair);
  const auto dist = pair_charge_distribution(state, p.first, p.second, routing);
  if (dist.at(kVacuum) < 1.0 - 1e-9)
    throw PreconditionViolation(std::string(what) + " pair (" + std::to_string(pair.first) + ", " +
                                std::to_string(pair.second) + ") is not in a definite vacuum channel");
}

// Shared driver for sampled and replayed forced measurement. `next` yields the
// outcome for a measurement given its pair.
template <typename Next>
ForcedResult run_forced(const StateVector& input, LeafPair target, LeafPair recovery, int max_attempts,
                        Routing routing, Next&& next) {
  shared_leaf(target, recovery);
  require_vacuum(input, recovery, routing, "recovery");
  if (max_attempts < 1) throw InvalidArgument("max_attempts must be >= 1");
  const LeafPair t = ordered(target), r = ordered(recovery);

  MeasurementRecord rec;
  rec.target_pair = target;
  rec.recovery_pair = recovery;
  rec.outcomes.push_back(kVacuum);
  StateVector state = input;
  for (int attempt = 1;; ++attempt) {
    rec.attempts = attempt;
    auto [outcome, next_state] = next(state, t);
    rec.trajectory_probability *= outcome.probability;
    rec.outcomes.push_back(outcome.charge);
    rec.measurements.push_back(outcome);
    state = std::move(next_state);
    if (outcome.charge == kVacuum) break;
    if (attempt >= max_attempts)
      throw MaxAttemptsExceeded("forced measurement did not reach the vacuum within " + std::to_string(max_attempts) +
                                " attempts");
    auto [e_outcome, e_state] = next(state, r);
    rec.trajectory_probability *= e_outcome.probability;
    rec.outcomes.push_back(e_outcome.charge);
    rec.measurements.push_back(e_outcome);
    state = std::move(e_state);
  }
  rec.phase = relative_phase(ideal_teleport(input, target, recovery, routing), state);
  return {std::move(state), std::move(rec)};
}

}  // namespace

ForcedResult forced_measurement(const StateVector& state, LeafPair target, LeafPair recovery, Rng& rng,
                                int max_attempts, Routing routing) {
  return run_forced(state, target, recovery, max_attempts, routing, [&](const StateVector& s, LeafPair p) {
    return sample_measurement(s, p.first, p.second, rng, routing);
  });
}

ForcedResult replay_forced_measurement(const StateVector& state, LeafPair target, LeafPair recovery,
                                       const std::vector<Charge>& outcomes, Routing routing) {
  if (outcomes.size() < 2 || outcomes.size() % 2 != 0 || outcomes.front() != kVacuum || outcomes.back() != kVacuum)
    throw InvalidArgument("outcome string must be e1 f1 ... en fn with e1 = fn = 0");
  for (std::size_t k = 1; k + 1 < outcomes.size(); k += 2)
    if (outcomes[k] == kVacuum) throw InvalidArgument("outcome string succeeds before its last attempt");
  std::size_t cursor = 1;
  const int attempts = static_cast<int>(outcomes.size() / 2);
  return run_forced(state, target, recovery, attempts, routing, [&](const StateVector& s, LeafPair p) {
    const Charge c = outcomes.at(cursor++);
    auto proj = project_pair(s, p.first, p.second, c, routing);
    return Sample{MeasurementOutcome{p, c, proj.probability, routing}, std::move(proj.state)};
  });
}

StateVector ideal_teleport(const StateVector& state, LeafPair target, LeafPair recovery, Routing routing) {
  shared_leaf(target, recovery);
  require_vacuum(state, recovery, routing, "recovery");
  const LeafPair t = ordered(target);
  return project_pair(state, t.first, t.second, kVacuum, routing).state;
}

double expected_attempt_bound(const AnyonModel& model, Charge a) {
  model.check(a);
  return model.qdim(a) * model.qdim(a);
}

double failure_tail_probability(const AnyonModel& model, Charge a, int attempts) {
  model.check(a);
  if (attempts < 0) throw InvalidArgument("attempt count must be >= 0");
  const double d2 = model.qdim(a) * model.qdim(a);
  return std::pow(1.0 - 1.0 / d2, attempts);
}

double success_probability(const AnyonModel& model, Charge a, Charge e) {
  model.check(a);
  model.check(e);
  return model.qdim(e) / (model.qdim(a) * model.qdim(a));
}

double expected_attempts(const AnyonModel& model, Charge a) {
  model.check(a);
  const Charge abar = model.dual(a);
  const auto block = model.f_block(a, abar, a, a);
  const auto& es = block.rows;
  const auto& fs = block.cols;
  const auto ne = static_cast<Eigen::Index>(es.size());
  // Q(e, e') = sum_{f != 0} Prob(f|e) Prob(e'|f); attempts from e: n = 1 + Q n.
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(ne, ne);
  for (Eigen::Index e = 0; e < ne; ++e)
    for (std::size_t f = 0; f < fs.size(); ++f) {
      if (fs[f] == kVacuum) continue;
      const double pf = std::norm(block.matrix(e, static_cast<Eigen::Index>(f)));
      for (Eigen::Index e2 = 0; e2 < ne; ++e2)
        q(e, e2) += pf * std::norm(block.matrix(e2, static_cast<Eigen::Index>(f)));
    }
  const Eigen::VectorXd n =
      (Eigen::MatrixXd::Identity(ne, ne) - q).fullPivLu().solve(Eigen::VectorXd::Ones(ne));
  for (Eigen::Index e = 0; e < ne; ++e)
    if (es[static_cast<std::size_t>(e)] == kVacuum) return n(e);
  throw ModelError("a x abar has no vacuum channel");
}

std::string_view to_string(BraidDirection d) { return d == BraidDirection::positive ? "positive" : "inverse"; }

std::array<std::pair<LeafPair, LeafPair>, 3> braid_measurement_pairs(const Quad& q, BraidDirection direction) {
  const LeafPair p12{q[0], q[1]}, p23{q[1], q[2]}, p24{q[1], q[3]};
  if (direction == BraidDirection::positive) return {{{p12, p23}, {p24, p12}, {p23, p24}}};
  return {{{p24, p23}, {p12, p24}, {p23, p12}}};
}

BraidDirection realized_direction(BraidDirection direction, Routing routing) {
  if (routing == Routing::under) return direction;
  return direction == BraidDirection::positive ? BraidDirection::inverse : BraidDirection::positive;
}

namespace {

void check_contiguous(const StateVector& state, const Quad& quad) {
  const int n = state.num_leaves();
  for (int k = 0; k < 4; ++k)
    if (quad[k] < 0 || quad[k] >= n || (k > 0 && quad[k] != quad[k - 1] + 1))
      throw InvalidArgument("quad must be four contiguous leaves inside the register");
}

template <typename Step>
BraidResult run_braid(const StateVector& state, const Quad& roles, BraidDirection direction, Step&& step) {
  for (int k = 0; k < 4; ++k) {
    if (roles[k] < 0 || roles[k] >= state.num_leaves()) throw InvalidArgument("quad leaf outside the register");
    for (int l = 0; l < k; ++l)
      if (roles[k] == roles[l]) throw InvalidArgument("quad leaves must be distinct");
  }
  BraidRecord rec;
  rec.direction = direction;
  StateVector current = state;
  const auto pairs = braid_measurement_pairs(roles, direction);
  for (std::size_t s = 0; s < 3; ++s) {
    auto [next, record] = step(s, current, pairs[s].first, pairs[s].second);
    current = std::move(next);
    rec.steps[s] = std::move(record);
  }
  return {std::move(current), std::move(rec)};
}

BraidResult compare_with_exchange(const StateVector& input, const Quad& quad, BraidDirection direction,
                                  Routing routing, BraidResult result) {
  const auto realized = realized_direction(direction, routing);
  finish_braid_record(result.record, direct_exchange(input, quad, realized), result.state,
                      input.leaves()[quad[0]], realized);
  return result;
}

}  // namespace

BraidResult measurement_braid_steps(const StateVector& state, const Quad& roles, BraidDirection direction, Rng& rng,
                                    int max_attempts, Routing routing) {
  return run_braid(state, roles, direction, [&](std::size_t, const StateVector& s, LeafPair t, LeafPair r) {
    return forced_measurement(s, t, r, rng, max_attempts, routing);
  });
}

BraidResult measurement_braid(const StateVector& state, const Quad& quad, BraidDirection direction, Rng& rng,
                              int max_attempts, Routing routing) {
  check_contiguous(state, quad);
  require_vacuum(state, {quad[1], quad[2]}, routing, "resource");
  return compare_with_exchange(state, quad, direction, routing,
                               measurement_braid_steps(state, quad, direction, rng, max_attempts, routing));
}

BraidResult replay_measurement_braid(const StateVector& state, const Quad& quad, BraidDirection direction,
                                     const std::array<std::vector<Charge>, 3>& outcomes, Routing routing) {
  check_contiguous(state, quad);
  require_vacuum(state, {quad[1], quad[2]}, routing, "resource");
  auto result = run_braid(state, quad, direction, [&](std::size_t k, const StateVector& s, LeafPair t, LeafPair r) {
    return replay_forced_measurement(s, t, r, outcomes[k], routing);
  });
  return compare_with_exchange(state, quad, direction, routing, std::move(result));
}

void finish_braid_record(BraidRecord& record, const StateVector& reference, const StateVector& result, Charge a,
                         BraidDirection realized) {
  record.extracted_phase = relative_phase(reference, result);
  // The all-first-attempt trajectory equals the direct exchange up to one curl
  // on the teleported line.
  record.isotopy = DiagramIsotopyNote{};
  record.isotopy.twist(result.model(), a, realized == BraidDirection::positive ? -1 : 1);
}

StateVector direct_exchange(const StateVector& state, const Quad& quad, BraidDirection direction) {
  const int p = quad[0];
  // Carry the right line leftwards over the pair, exchange, carry the left
  // line rightwards over the pair.
  StateVector s = apply_braid(state, p + 2, -1);
  s = apply_braid(s, p + 1, -1);
  s = apply_braid(s, p, direction == BraidDirection::positive ? 1 : -1);
  s = apply_braid(s, p + 1, 1);
  return apply_braid(s, p + 2, 1);
}

Complex relative_phase(const StateVector& s1, const StateVector& s2, double tolerance) {
  const Complex ov = inner(s1, s2);
  const double mag = std::abs(ov);
  if (mag < 1.0 - tolerance)
    throw NotPhaseEquivalent("states differ by more than a phase: |<s1|s2>| = " + std::to_string(mag));
  return ov / mag;
}

double fidelity(const StateVector& s1, const StateVector& s2) { return std::abs(inner(s1, s2)); }

}  // namespace motqc
