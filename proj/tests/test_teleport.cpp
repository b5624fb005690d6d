#include <gtest/gtest.h>

#include <numbers>

#include "motqc/teleport.hpp"
#include "oracle.hpp"

using namespace motqc;

namespace {

const double kPhi = oracle::kPhi;

std::vector<ModelPtr> models() {
  return {load_builtin("fibonacci"), load_builtin("ising"), load_builtin("su2_k", 3), load_builtin("su2_k", 4)};
}

Charge largest_total(const ModelPtr& m, const std::vector<Charge>& leaves) {
  Charge best = kVacuum;
  std::size_t size = 0;
  for (Charge c : m->charges())
    if (auto s = Basis::make(m, leaves, c)->size(); s > size) {
      size = s;
      best = c;
    }
  return best;
}

StateVector encoded(const ModelPtr& m, Charge a, Rng& rng) {
  const std::vector<Charge> leaves(3, a);
  return random_state(m, leaves, largest_total(m, leaves), rng);
}

// Resource pair inserted at quad[1], quad[2] of a random register of `n` leaves.
StateVector quad_register(const ModelPtr& m, Charge a, int n, int offset, Rng& rng) {
  const std::vector<Charge> leaves(static_cast<std::size_t>(n - 2), a);
  return attach_pair(random_state(m, leaves, largest_total(m, leaves), rng), offset + 1, a);
}

}  // namespace

TEST(Teleport, ClosedFormProbabilities) {
  const auto fib = load_builtin("fibonacci");
  const auto ising = load_builtin("ising");
  const Charge s = ising->charge("1/2");
  EXPECT_NEAR(expected_attempt_bound(*ising, s), 2.0, 1e-14);
  EXPECT_NEAR(expected_attempt_bound(*fib, Charge{1}), kPhi * kPhi, 1e-14);
  EXPECT_NEAR(expected_attempt_bound(*fib, kVacuum), 1.0, 0.0);
  EXPECT_NEAR(failure_tail_probability(*ising, s, 20), std::pow(0.5, 20), 1e-20);
  EXPECT_NEAR(failure_tail_probability(*fib, Charge{1}, 0), 1.0, 0.0);
  EXPECT_NEAR(success_probability(*fib, Charge{1}, Charge{0}), 1 / (kPhi * kPhi), 1e-14);
  EXPECT_NEAR(success_probability(*fib, Charge{1}, Charge{1}), 1 / kPhi, 1e-14);
  EXPECT_NEAR(success_probability(*ising, s, ising->charge("1")), 0.5, 1e-14);
}

TEST(Teleport, MarkovMeanClosedForm) {
  // Fibonacci: from e, success with p_e; on failure (f = 1) the next e' is 0
  // with |F_01|^2 = 1/phi and 1 with |F_11|^2 = 1/phi^2.
  const double p0 = 1 / (kPhi * kPhi), p1 = 1 / kPhi;
  const double q0 = 1 / kPhi, q1 = 1 / (kPhi * kPhi);
  // n0 = 1 + (1-p0)(q0 n0 + q1 n1), n1 = 1 + (1-p1)(q0 n0 + q1 n1).
  const double a11 = 1 - (1 - p0) * q0, a12 = -(1 - p0) * q1;
  const double a21 = -(1 - p1) * q0, a22 = 1 - (1 - p1) * q1;
  const double det = a11 * a22 - a12 * a21;
  const double n0 = (a22 - a12) / det;
  const auto fib = load_builtin("fibonacci");
  EXPECT_NEAR(expected_attempts(*fib, Charge{1}), n0, 1e-12);
  EXPECT_LE(n0, kPhi * kPhi);
  const auto ising = load_builtin("ising");
  EXPECT_NEAR(expected_attempts(*ising, ising->charge("1/2")), 2.0, 1e-12);
}

TEST(Teleport, MarkovMeanBySimulation) {
  // Simulate the e/f chain straight from the F-matrix and compare with both
  // expected_attempts and the forced-measurement protocol itself.
  for (const auto& m : {load_builtin("fibonacci"), load_builtin("su2_k", 4)}) {
    const Charge a{1};
    const auto es = m->products(a, m->dual(a));
    Rng rng(77);
    const int n = 20000;
    double chain_sum = 0.0;
    for (int t = 0; t < n; ++t) {
      Charge e = kVacuum;
      for (int attempts = 1;; ++attempts) {
        double u = rng.uniform();
        Charge f = es.back();
        for (Charge c : es) {
          u -= std::norm(m->f(a, m->dual(a), a, a, e, c));
          if (u < 0) {
            f = c;
            break;
          }
        }
        if (f == kVacuum) {
          chain_sum += attempts;
          break;
        }
        u = rng.uniform();
        e = es.back();
        for (Charge c : es) {
          u -= std::norm(m->f(a, m->dual(a), a, a, c, f));
          if (u < 0) {
            e = c;
            break;
          }
        }
      }
    }
    const double exact = expected_attempts(*m, a);
    EXPECT_NEAR(chain_sum / n, exact, 0.05) << m->name();

    double protocol_sum = 0.0;
    const int trials = 3000;
    for (int t = 0; t < trials; ++t) {
      Rng r = Rng::substream(5, static_cast<std::uint64_t>(t));
      const auto in = attach_pair(encoded(m, a, r), 0, a);
      protocol_sum += forced_measurement(in, {1, 2}, {0, 1}, r).record.attempts;
    }
    EXPECT_NEAR(protocol_sum / trials, exact, 0.1) << m->name();
  }
}

TEST(Teleport, ForcedMeasurementTeleports) {
  for (const auto& m : models()) {
    const Charge a{1};
    for (int t = 0; t < 20; ++t) {
      Rng rng = Rng::substream(3, static_cast<std::uint64_t>(t));
      const auto psi = encoded(m, a, rng);
      const auto in = attach_pair(psi, 0, a);
      const auto res = forced_measurement(in, {1, 2}, {0, 1}, rng);
      EXPECT_GE(fidelity(attach_pair(psi, 1, a), res.state), 1 - 1e-9) << m->name();
      const auto& rec = res.record;
      ASSERT_EQ(rec.outcomes.size(), 2u * static_cast<std::size_t>(rec.attempts));
      EXPECT_EQ(rec.outcomes.front(), kVacuum);
      EXPECT_EQ(rec.outcomes.back(), kVacuum);
      for (std::size_t j = 1; j + 2 < rec.outcomes.size(); j += 2) EXPECT_NE(rec.outcomes[j], kVacuum);
      EXPECT_NEAR(std::abs(rec.phase), 1.0, 1e-9);
      EXPECT_NEAR(std::abs(relative_phase(ideal_teleport(in, {1, 2}, {0, 1}), res.state) - rec.phase), 0.0, 1e-9);
      const auto replay = replay_forced_measurement(in, {1, 2}, {0, 1}, rec.outcomes);
      EXPECT_LT((replay.state.amplitudes() - res.state.amplitudes()).norm(), 1e-12);
      EXPECT_NEAR(replay.record.trajectory_probability, rec.trajectory_probability, 1e-12);
    }
  }
}

TEST(Teleport, AbelianChargeSucceedsImmediately) {
  const auto ising = load_builtin("ising");
  const Charge psi = ising->charge("1");
  Rng rng(1);
  const auto in = attach_pair(basis_state(ising, {psi}, psi, 0), 0, psi);
  const auto res = forced_measurement(in, {1, 2}, {0, 1}, rng);
  EXPECT_EQ(res.record.attempts, 1);
  EXPECT_NEAR(std::abs(res.record.phase - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(in, res.state), 1.0, 1e-12);
}

TEST(Teleport, Preconditions) {
  const auto fib = load_builtin("fibonacci");
  Rng rng(2);
  const auto psi = random_state(fib, std::vector<Charge>(4, Charge{1}), kVacuum, rng);
  EXPECT_THROW(forced_measurement(psi, {1, 2}, {0, 1}, rng), PreconditionViolation);
  const auto in = attach_pair(encoded(fib, Charge{1}, rng), 0, Charge{1});
  EXPECT_THROW(forced_measurement(in, {2, 3}, {0, 1}, rng), PreconditionViolation);
  int exceeded = 0;
  for (int t = 0; t < 50; ++t) {
    try {
      forced_measurement(in, {1, 2}, {0, 1}, rng, 1);
    } catch (const MaxAttemptsExceeded&) {
      ++exceeded;
    }
  }
  EXPECT_GT(exceeded, 0);
}

TEST(Teleport, MeasurementPairsFollowTheProtocol) {
  const Quad q{0, 1, 2, 3};
  const auto pos = braid_measurement_pairs(q, BraidDirection::positive);
  // (target <- recovery): 12 <- 23, 24 <- 12, 23 <- 24, with leaves numbered from 0.
  EXPECT_EQ(pos[0].first, (LeafPair{0, 1}));
  EXPECT_EQ(pos[0].second, (LeafPair{1, 2}));
  EXPECT_EQ(pos[1].first, (LeafPair{1, 3}));
  EXPECT_EQ(pos[1].second, (LeafPair{0, 1}));
  EXPECT_EQ(pos[2].first, (LeafPair{1, 2}));
  EXPECT_EQ(pos[2].second, (LeafPair{1, 3}));
  const auto inv = braid_measurement_pairs(q, BraidDirection::inverse);
  EXPECT_EQ(inv[0].first, (LeafPair{1, 3}));
  EXPECT_EQ(inv[0].second, (LeafPair{1, 2}));
  EXPECT_EQ(inv[1].first, (LeafPair{0, 1}));
  EXPECT_EQ(inv[2].first, (LeafPair{1, 2}));
  EXPECT_EQ(realized_direction(BraidDirection::positive, Routing::under), BraidDirection::positive);
  EXPECT_EQ(realized_direction(BraidDirection::positive, Routing::over), BraidDirection::inverse);
}

TEST(Teleport, DirectExchangeIsTheOuterBraid) {
  // On a 4-leaf register with the pair in the vacuum, exchanging leaves 0 and 3
  // around the pair is R on the outer lines: the dense oracle applied to the
  // outer anyons alone, with the pair reinserted.
  Rng rng(9);
  for (const auto& m : models()) {
    const Charge a{1};
    const auto outer = random_state(m, {a, a}, kVacuum, rng);
    const auto in = attach_pair(outer, 1, a);
    for (auto dir : {BraidDirection::positive, BraidDirection::inverse}) {
      const int sign = dir == BraidDirection::positive ? 1 : -1;
      const Vector expect = oracle::dense_braid(outer.basis(), 0, sign) * outer.amplitudes();
      const auto got = direct_exchange(in, {0, 1, 2, 3}, dir);
      EXPECT_GE(fidelity(attach_pair(outer.with_amplitudes(expect), 1, a), got), 1 - 1e-12) << m->name();
    }
  }
}

TEST(Teleport, MeasurementBraidMatchesExchange) {
  for (const auto& m : models()) {
    const Charge a{1};
    for (Routing routing : {Routing::under, Routing::over})
      for (int n = 4; n <= 6; ++n)
        for (int offset = 0; offset + 4 <= n; ++offset)
          for (auto dir : {BraidDirection::positive, BraidDirection::inverse}) {
            Rng rng = Rng::substream(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(offset));
            const auto in = quad_register(m, a, n, offset, rng);
            const Quad q{offset, offset + 1, offset + 2, offset + 3};
            const auto res = measurement_braid(in, q, dir, rng, kDefaultMaxAttempts, routing);
            const auto realized = realized_direction(dir, routing);
            EXPECT_GE(fidelity(direct_exchange(in, q, realized), res.state), 1 - 1e-9) << m->name();
            EXPECT_NEAR(pair_charge_distribution(res.state, offset + 1, offset + 2).at(kVacuum), 1.0, 1e-10);
            EXPECT_NEAR(std::abs(res.record.extracted_phase), 1.0, 1e-9);
            const Complex product = res.record.isotopy.factor * res.record.steps[0].phase *
                                    res.record.steps[1].phase * res.record.steps[2].phase;
            EXPECT_NEAR(std::abs(product - res.record.extracted_phase), 0.0, 1e-9);
          }
  }
}

TEST(Teleport, CurlFactorIsTheTopologicalSpin) {
  const auto fib = load_builtin("fibonacci");
  Rng rng(31);
  const auto in = quad_register(fib, Charge{1}, 4, 0, rng);
  const auto theta = topological_spin(*fib, Charge{1});
  const auto pos = measurement_braid(in, {0, 1, 2, 3}, BraidDirection::positive, rng);
  EXPECT_NEAR(std::abs(pos.record.isotopy.factor - std::conj(theta)), 0.0, 1e-12);
  const auto inv = measurement_braid(in, {0, 1, 2, 3}, BraidDirection::inverse, rng);
  EXPECT_NEAR(std::abs(inv.record.isotopy.factor - theta), 0.0, 1e-12);
}

TEST(Teleport, PositiveThenInverseIsIdentity) {
  for (const auto& m : models()) {
    Rng rng(41);
    const auto in = quad_register(m, Charge{1}, 5, 1, rng);
    const Quad q{1, 2, 3, 4};
    const auto once = measurement_braid(in, q, BraidDirection::positive, rng);
    const auto back = measurement_braid(once.state, q, BraidDirection::inverse, rng);
    EXPECT_GE(fidelity(in, back.state), 1 - 1e-9);
  }
}

TEST(Teleport, PhaseDependsOnlyOnOutcomes) {
  for (const auto& m : models()) {
    Rng rng(53);
    const Quad q{0, 1, 2, 3};
    const auto in1 = quad_register(m, Charge{1}, 5, 0, rng);
    const auto in2 = quad_register(m, Charge{1}, 5, 0, rng);
    for (auto dir : {BraidDirection::positive, BraidDirection::inverse}) {
      const auto first = measurement_braid(in1, q, dir, rng);
      const std::array<std::vector<Charge>, 3> outcomes{first.record.steps[0].outcomes,
                                                        first.record.steps[1].outcomes,
                                                        first.record.steps[2].outcomes};
      const auto again = replay_measurement_braid(in2, q, dir, outcomes);
      EXPECT_NEAR(std::abs(again.record.extracted_phase - first.record.extracted_phase), 0.0, 1e-9) << m->name();
      for (int s = 0; s < 3; ++s)
        EXPECT_NEAR(std::abs(again.record.steps[s].phase - first.record.steps[s].phase), 0.0, 1e-9);
    }
  }
}

TEST(Teleport, BraidPreconditions) {
  const auto fib = load_builtin("fibonacci");
  Rng rng(61);
  const auto in = quad_register(fib, Charge{1}, 5, 0, rng);
  EXPECT_THROW(measurement_braid(in, {0, 1, 3, 4}, BraidDirection::positive, rng), InvalidArgument);
  EXPECT_THROW(measurement_braid(in, {1, 2, 3, 4}, BraidDirection::positive, rng), PreconditionViolation);
}

TEST(Teleport, RelativePhaseAndFidelity) {
  const auto fib = load_builtin("fibonacci");
  Rng rng(71);
  const auto s = random_state(fib, std::vector<Charge>(4, Charge{1}), kVacuum, rng);
  EXPECT_NEAR(std::abs(relative_phase(s, s) - 1.0), 0.0, 1e-12);
  const Complex i{0.0, 1.0};
  EXPECT_NEAR(std::abs(relative_phase(s, s.with_amplitudes(i * s.amplitudes())) - i), 0.0, 1e-12);
  const auto b0 = basis_state(fib, std::vector<Charge>(4, Charge{1}), kVacuum, 0);
  const auto b1 = basis_state(fib, std::vector<Charge>(4, Charge{1}), kVacuum, 1);
  EXPECT_THROW(relative_phase(b0, b1), NotPhaseEquivalent);
  EXPECT_NEAR(fidelity(b0, b1), 0.0, 0.0);
  EXPECT_NEAR(fidelity(s, s), 1.0, 1e-12);
}
