// fusion_space.hpp
//
// States of n anyons as amplitude vectors over fusion-tree bases.
//
// The standard basis is the left-canonical chain ((..((l0 l1)_{y1} l2)_{y2} ..) l_{n-1})_total.
// A tree stores the intermediate chain charges y1 .. y_{n-2} as `internals`.
// A "paired" basis at site s (1 <= s <= n-2) fuses leaves s and s+1 first:
// its internals are the canonical ones with y_s replaced by the pair charge.
#ifndef MOTQC_FUSION_SPACE_HPP
#define MOTQC_FUSION_SPACE_HPP

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "motqc/core.hpp"
#include "motqc/model.hpp"
#include "motqc/rng.hpp"

namespace motqc {

struct FusionTree {
  std::vector<Charge> leaves;
  std::vector<Charge> internals;
  Charge total;
};

class Basis;
using BasisPtr = std::shared_ptr<const Basis>;

class Basis {
 public:
  /// Enumerates every admissible tree, ordered lexicographically on internals.
  static BasisPtr make(ModelPtr model, std::vector<Charge> leaves, Charge total,
                       std::optional<int> paired_site = std::nullopt);

  const AnyonModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const std::vector<Charge>& leaves() const { return leaves_; }
  int num_leaves() const { return static_cast<int>(leaves_.size()); }
  Charge total() const { return total_; }
  std::optional<int> paired_site() const { return paired_site_; }
  bool canonical() const { return !paired_site_; }

  std::size_t size() const { return internals_.size(); }
  const std::vector<Charge>& internals(std::size_t i) const { return internals_[i]; }
  FusionTree tree(std::size_t i) const { return {leaves_, internals_[i], total_}; }
  std::optional<std::size_t> find(const std::vector<Charge>& internals) const;

  /// Charges along the chain: [l0, internals..., total] (n >= 2), [l0] (n == 1), [] (n == 0).
  std::vector<Charge> chain(std::size_t i) const;

  bool same_space(const Basis& other) const;

 private:
  Basis() = default;
  ModelPtr model_;
  std::vector<Charge> leaves_;
  Charge total_;
  std::optional<int> paired_site_;
  std::vector<std::vector<Charge>> internals_;
  std::map<std::vector<Charge>, std::size_t> index_;
};

/// Normalized amplitudes over a basis. Values are immutable; every operation
/// returns a new state.
class StateVector {
 public:
  StateVector(BasisPtr basis, Vector amplitudes);

  const Basis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const AnyonModel& model() const { return basis_->model(); }
  const std::vector<Charge>& leaves() const { return basis_->leaves(); }
  int num_leaves() const { return basis_->num_leaves(); }
  Charge total() const { return basis_->total(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Complex amplitude(const std::vector<Charge>& internals) const;
  double norm() const { return amplitudes_.norm(); }

  /// Same basis, new amplitudes.
  StateVector with_amplitudes(Vector amplitudes) const { return {basis_, std::move(amplitudes)}; }

 private:
  BasisPtr basis_;
  Vector amplitudes_;
};

enum class FMoveDirection { to_paired, to_canonical };

std::vector<FusionTree> standard_basis(const ModelPtr& model, const std::vector<Charge>& leaves, Charge total);

/// Unit vector on one tree of the standard basis.
StateVector basis_state(const ModelPtr& model, const std::vector<Charge>& leaves, Charge total, std::size_t index);
/// Gaussian-random normalized state. Throws InvalidArgument if the space is empty.
StateVector random_state(const ModelPtr& model, const std::vector<Charge>& leaves, Charge total, Rng& rng);
/// The zero-leaf register (total charge 0).
StateVector vacuum_state(const ModelPtr& model);

/// |a, abar; 0>
StateVector entangled_pair_state(const ModelPtr& model, Charge a);
/// Inserts |a, abar; 0> at leaf positions (position, position + 1).
StateVector attach_pair(const StateVector& state, int position, Charge a);

/// Reassociation at `site`: canonical <-> paired(site). Unitary.
StateVector apply_f_move(const StateVector& state, int site, FMoveDirection direction);
/// Exchanges leaves i, i+1. sign +1 applies R^{ab}_c (the left line moves
/// right, crossing over); sign -1 is its inverse.
StateVector apply_braid(const StateVector& state, int i, int sign);

/// <s1|s2>
Complex inner(const StateVector& s1, const StateVector& s2);

// Operator matrices used by the state functions above and the measurement layer.

/// Matrix from the canonical basis to paired(site) over the same leaves.
SparseMatrix f_move_matrix(const Basis& canonical, const Basis& paired);
struct BraidOperator {
  BasisPtr target;
  SparseMatrix matrix;
};
BraidOperator braid_operator(const BasisPtr& canonical, int i, int sign);

/// Phase picked up from bending charge lines (kappa factors) and from
/// straightening a curl (topological spin). Always unit modulus.
struct DiagramIsotopyNote {
  Complex factor{1.0, 0.0};
  void bend(const AnyonModel& model, Charge a) {
    const Complex k = kappa(model, a);
    factor *= k / std::abs(k);
  }
  /// sign +1 removes a counterclockwise curl (theta_a), -1 a clockwise one.
  void twist(const AnyonModel& model, Charge a, int sign) {
    const Complex t = topological_spin(model, a);
    factor *= sign > 0 ? t : std::conj(t);
  }
};

}  // namespace motqc

#endif  // MOTQC_FUSION_SPACE_HPP
