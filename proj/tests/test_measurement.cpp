#include <gtest/gtest.h>

#include "motqc/measurement.hpp"
#include "motqc/teleport.hpp"
#include "oracle.hpp"

using namespace motqc;

namespace {

const double kPhi = oracle::kPhi;

// (a, abar, a) with the first pair in the vacuum channel.
StateVector teleport_configuration(const ModelPtr& m, Charge a) {
  return attach_pair(basis_state(m, {a}, a, 0), 0, a);
}

// Brings leaf j next to leaf i by explicit exchanges, then reads the adjacent pair.
std::map<Charge, double> routed_oracle(StateVector s, int i, int j, Routing routing) {
  for (int k = j - 1; k > i; --k) s = apply_braid(s, k, transport_sign(routing));
  return oracle::adjacent_pair_distribution(s, i);
}

}  // namespace

TEST(Measurement, DefiniteChargePair) {
  for (const auto& m : {load_builtin("fibonacci"), load_builtin("ising")}) {
    const auto pair = entangled_pair_state(m, Charge{1});
    const auto dist = pair_charge_distribution(pair, 0, 1);
    EXPECT_NEAR(dist.at(kVacuum), 1.0, 1e-14);
    const auto proj = project_pair(pair, 0, 1, kVacuum);
    EXPECT_NEAR(proj.probability, 1.0, 1e-14);
    EXPECT_NEAR(std::abs(inner(proj.state, pair)), 1.0, 1e-14);
    const Charge other = m->products(Charge{1}, Charge{1}).back();
    EXPECT_THROW(project_pair(pair, 0, 1, other), ZeroProbabilityOutcome);
    Rng rng(4);
    for (int k = 0; k < 20; ++k) EXPECT_EQ(sample_measurement(pair, 0, 1, rng).outcome.charge, kVacuum);
  }
}

TEST(Measurement, TeleportConfigurationDistributions) {
  const auto fib = load_builtin("fibonacci");
  auto d = pair_charge_distribution(teleport_configuration(fib, Charge{1}), 1, 2);
  EXPECT_NEAR(d.at(Charge{0}), 1.0 / (kPhi * kPhi), 1e-12);
  EXPECT_NEAR(d.at(Charge{1}), 1.0 / kPhi, 1e-12);
  const auto ising = load_builtin("ising");
  d = pair_charge_distribution(teleport_configuration(ising, ising->charge("1/2")), 1, 2);
  EXPECT_NEAR(d.at(ising->charge("0")), 0.5, 1e-12);
  EXPECT_NEAR(d.at(ising->charge("1")), 0.5, 1e-12);
  EXPECT_NEAR(d.at(ising->charge("1/2")), 0.0, 1e-15);
}

TEST(Measurement, ProjectionTeleportsInformation) {
  const auto fib = load_builtin("fibonacci");
  const auto s = teleport_configuration(fib, Charge{1});
  const auto proj = project_pair(s, 1, 2, kVacuum);
  EXPECT_NEAR(pair_charge_distribution(proj.state, 1, 2).at(kVacuum), 1.0, 1e-12);
  const auto target = attach_pair(basis_state(fib, {Charge{1}}, Charge{1}, 0), 1, Charge{1});
  EXPECT_NEAR(std::abs(inner(target, proj.state)), 1.0, 1e-9);
}

TEST(Measurement, AdjacentDistributionMatchesOracle) {
  Rng rng(17);
  for (const auto& m : {load_builtin("fibonacci"), load_builtin("ising"), load_builtin("su2_k", 5)}) {
    const std::vector<Charge> leaves(6, Charge{1});
    for (Charge total : m->charges()) {
      if (Basis::make(m, leaves, total)->size() == 0) continue;
      const auto s = random_state(m, leaves, total, rng);
      for (int i = 0; i + 1 < 6; ++i) {
        const auto got = pair_charge_distribution(s, i, i + 1);
        auto expect = oracle::adjacent_pair_distribution(s, i);
        double sum = 0.0;
        for (Charge c : m->charges()) {
          EXPECT_NEAR(got.at(c), expect[c], 1e-12);
          sum += got.at(c);
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
    }
  }
}

TEST(Measurement, NonAdjacentPairsFollowRouting) {
  Rng rng(23);
  for (const auto& m : {load_builtin("fibonacci"), load_builtin("ising")}) {
    const std::vector<Charge> leaves(6, Charge{1});
    const auto s = random_state(m, leaves, kVacuum, rng);
    for (Routing r : {Routing::over, Routing::under})
      for (int i = 0; i < 6; ++i)
        for (int j = i + 2; j < 6; ++j) {
          const auto got = pair_charge_distribution(s, i, j, r);
          auto expect = routed_oracle(s, i, j, r);
          for (Charge c : m->charges()) EXPECT_NEAR(got.at(c), expect[c], 1e-12) << to_string(r) << i << j;
        }
  }
}

TEST(Measurement, ProjectorIsIdempotentAndBornConsistent) {
  Rng rng(29);
  const auto fib = load_builtin("fibonacci");
  const auto s = random_state(fib, std::vector<Charge>(5, Charge{1}), Charge{1}, rng);
  for (Routing r : {Routing::over, Routing::under}) {
    const auto dist = pair_charge_distribution(s, 0, 3, r);
    for (Charge c : fib->charges()) {
      const auto p = project_pair(s, 0, 3, c, r);
      EXPECT_NEAR(p.probability, dist.at(c), 1e-12);
      EXPECT_NEAR(std::norm(inner(s, p.state)), p.probability, 1e-12);
      const auto again = project_pair(p.state, 0, 3, c, r);
      EXPECT_NEAR(again.probability, 1.0, 1e-12);
      EXPECT_NEAR(std::abs(inner(again.state, p.state)), 1.0, 1e-12);
    }
  }
}

TEST(Measurement, SamplingFrequencies) {
  const auto fib = load_builtin("fibonacci");
  const auto s = teleport_configuration(fib, Charge{1});
  Rng rng(99);
  const int n = 10000;
  int zeros = 0;
  for (int k = 0; k < n; ++k) zeros += sample_measurement(s, 1, 2, rng).outcome.charge == kVacuum;
  const double p = 1.0 / (kPhi * kPhi);
  EXPECT_LT(std::abs(zeros / double(n) - p), 3 * std::sqrt(p * (1 - p) / n));
}

TEST(Measurement, SamplingIsDeterministic) {
  const auto fib = load_builtin("fibonacci");
  Rng seed_rng(1);
  const auto s = random_state(fib, std::vector<Charge>(6, Charge{1}), kVacuum, seed_rng);
  auto run = [&] {
    Rng rng(1234);
    std::vector<Charge> out;
    auto cur = s;
    for (int k = 0; k < 30; ++k) {
      auto smp = sample_measurement(cur, k % 5, k % 5 + 1, rng);
      out.push_back(smp.outcome.charge);
      cur = smp.state;
    }
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(Measurement, RoutingNames) {
  EXPECT_EQ(parse_routing("over"), Routing::over);
  EXPECT_EQ(parse_routing(to_string(Routing::under)), Routing::under);
  EXPECT_THROW(parse_routing("sideways"), InvalidArgument);
  EXPECT_EQ(transport_sign(Routing::under), 1);
  EXPECT_EQ(transport_sign(Routing::over), -1);
}

TEST(Measurement, InvalidPairs) {
  const auto fib = load_builtin("fibonacci");
  const auto s = teleport_configuration(fib, Charge{1});
  EXPECT_THROW(pair_charge_distribution(s, 1, 1), InvalidArgument);
  EXPECT_THROW(pair_charge_distribution(s, 0, 3), InvalidArgument);
}
