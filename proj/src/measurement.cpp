// measurement.cpp
#include "motqc/measurement.hpp"

#include <string>

namespace motqc {
namespace {

// The pair (i, j) viewed in a frame where leaf j has been carried to i + 1.
// `amplitudes` are expressed in a basis whose pair charge at (i, i+1) is
// directly readable (the chain value for i == 0, the paired label otherwise).
struct PairFrame {
  std::vector<StateVector> path;  // states along the transport, path.back() is adjacent
  BasisPtr readout;               // basis of `amplitudes`
  SparseMatrix to_readout;        // from path.back() basis; empty when i == 0
  Vector amplitudes;
  int i = 0;

  Charge pair_charge(std::size_t k) const {
    return i == 0 ? readout->chain(k)[1] : readout->internals(k)[static_cast<std::size_t>(i - 1)];
  }
};

PairFrame frame(const StateVector& state, int i, int j, Routing routing) {
  if (!state.basis().canonical()) throw BasisMismatch("measurement requires a state in the standard basis");
  const int n = state.num_leaves();
  if (i < 0 || j >= n || i >= j)
    throw InvalidArgument("invalid leaf pair (" + std::to_string(i) + ", " + std::to_string(j) + ") for " +
                          std::to_string(n) + " leaves");
  PairFrame f;
  f.i = i;
  f.path.push_back(state);
  for (int site = j - 1; site > i; --site) f.path.push_back(apply_braid(f.path.back(), site, transport_sign(routing)));
  const StateVector& adj = f.path.back();
  if (i == 0) {
    f.readout = adj.basis_ptr();
    f.amplitudes = adj.amplitudes();
  } else {
    f.readout = Basis::make(adj.basis().model_ptr(), adj.leaves(), adj.total(), i);
    f.to_readout = f_move_matrix(adj.basis(), *f.readout);
    f.amplitudes = f.to_readout * adj.amplitudes();
  }
  return f;
}

}  // namespace

std::string_view to_string(Routing r) { return r == Routing::over ? "over" : "under"; }

Routing parse_routing(std::string_view s) {
  if (s == "over") return Routing::over;
  if (s == "under") return Routing::under;
  throw InvalidArgument("routing must be 'over' or 'under', got '" + std::string(s) + "'");
}

int transport_sign(Routing routing) { return routing == Routing::over ? -1 : 1; }

ChargeDistribution pair_charge_distribution(const StateVector& state, int i, int j, Routing routing) {
  const auto f = frame(state, i, j, routing);
  ChargeDistribution dist;
  for (Charge c : state.model().charges()) dist[c] = 0.0;
  for (std::size_t k = 0; k < f.readout->size(); ++k)
    dist[f.pair_charge(k)] += std::norm(f.amplitudes(static_cast<Eigen::Index>(k)));
  return dist;
}

Projection project_pair(const StateVector& state, int i, int j, Charge c, Routing routing) {
  state.model().check(c);
  auto f = frame(state, i, j, routing);
  double prob = 0.0;
  for (std::size_t k = 0; k < f.readout->size(); ++k) {
    auto& amp = f.amplitudes(static_cast<Eigen::Index>(k));
    if (f.pair_charge(k) == c)
      prob += std::norm(amp);
    else
      amp = 0.0;
  }
  if (prob < kProbabilityFloor)
    throw ZeroProbabilityOutcome("pair (" + std::to_string(i) + ", " + std::to_string(j) + ") has probability " +
                                 std::to_string(prob) + " for charge " + state.model().label(c));
  f.amplitudes /= std::sqrt(prob);

  const StateVector& adj = f.path.back();
  StateVector out = adj.with_amplitudes(i == 0 ? f.amplitudes : Vector(f.to_readout.adjoint() * f.amplitudes));
  for (int site = i + 1; site < j; ++site) out = apply_braid(out, site, -transport_sign(routing));
  // Renormalize away round-off accumulated by the transport.
  Vector amps = out.amplitudes();
  amps.normalize();
  return {out.with_amplitudes(std::move(amps)), prob};
}

Sample sample_measurement(const StateVector& state, int i, int j, Rng& rng, Routing routing) {
  const auto dist = pair_charge_distribution(state, i, j, routing);
  const double u = rng.uniform();
  double acc = 0.0;
  Charge chosen{-1};
  Charge last_possible{-1};
  for (const auto& [c, p] : dist) {
    if (p < kProbabilityFloor) continue;
    last_possible = c;
    acc += p;
    if (u < acc) {
      chosen = c;
      break;
    }
  }
  if (chosen.index < 0) chosen = last_possible;  // u landed in the round-off gap above the total
  auto proj = project_pair(state, i, j, chosen, routing);
  return {MeasurementOutcome{{i, j}, chosen, proj.probability, routing}, std::move(proj.state)};
}

}  // namespace motqc
