// fusion_space.cpp
#include "motqc/fusion_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace motqc {
namespace {

// Appends every admissible chain y[0..n-1] (with y[n-1] == total) to `out`,
// recording internals y[1..n-2]. When paired_site = s, step s+1 fuses the
// pair charge stored at y[s] into y[s-1].
void enumerate(const AnyonModel& m, const std::vector<Charge>& leaves, Charge total, std::optional<int> paired,
               std::vector<Charge>& y, std::vector<std::vector<Charge>>& out) {
  const int n = static_cast<int>(leaves.size());
  const int i = static_cast<int>(y.size());
  if (i == n) {
    if (y.back() == total) out.emplace_back(y.begin() + 1, y.end() - 1);
    return;
  }
  std::vector<Charge> options;
  if (paired && i == *paired) {
    options = m.products(leaves[i], leaves[i + 1]);
  } else if (paired && i == *paired + 1) {
    options = m.products(y[i - 2], y[i - 1]);
  } else {
    options = m.products(y[i - 1], leaves[i]);
  }
  for (Charge c : options) {
    y.push_back(c);
    enumerate(m, leaves, total, paired, y, out);
    y.pop_back();
  }
}

std::string describe(const Basis& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.leaves().size(); ++i) s += (i ? "," : "") + b.model().label(b.leaves()[i]);
  return s + ")->" + b.model().label(b.total());
}

void require_canonical(const StateVector& s, const char* op) {
  if (!s.basis().canonical())
    throw BasisMismatch(std::string(op) + " requires a state in the standard (left-canonical) basis");
}

}  // namespace

BasisPtr Basis::make(ModelPtr model, std::vector<Charge> leaves, Charge total, std::optional<int> paired_site) {
  for (Charge c : leaves) model->check(c);
  model->check(total);
  const int n = static_cast<int>(leaves.size());
  if (paired_site && (*paired_site < 1 || *paired_site > n - 2))
    throw InvalidArgument("paired site " + std::to_string(*paired_site) + " out of range for " +
                          std::to_string(n) + " leaves");
  auto basis = std::shared_ptr<Basis>(new Basis());
  basis->model_ = std::move(model);
  basis->total_ = total;
  basis->paired_site_ = paired_site;
  if (n == 0) {
    if (total == kVacuum) basis->internals_.emplace_back();
  } else if (n == 1) {
    if (leaves[0] == total) basis->internals_.emplace_back();
  } else {
    std::vector<Charge> y{leaves[0]};
    enumerate(*basis->model_, leaves, total, paired_site, y, basis->internals_);
  }
  basis->leaves_ = std::move(leaves);
  std::sort(basis->internals_.begin(), basis->internals_.end());
  for (std::size_t i = 0; i < basis->internals_.size(); ++i) basis->index_.emplace(basis->internals_[i], i);
  return basis;
}

std::optional<std::size_t> Basis::find(const std::vector<Charge>& internals) const {
  auto it = index_.find(internals);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Charge> Basis::chain(std::size_t i) const {
  if (leaves_.empty()) return {};
  if (leaves_.size() == 1) return {leaves_[0]};
  std::vector<Charge> y;
  y.reserve(leaves_.size());
  y.push_back(leaves_[0]);
  y.insert(y.end(), internals_[i].begin(), internals_[i].end());
  y.push_back(total_);
  return y;
}

bool Basis::same_space(const Basis& other) const {
  return model_ == other.model_ && leaves_ == other.leaves_ && total_ == other.total_ &&
         paired_site_ == other.paired_site_;
}

StateVector::StateVector(BasisPtr basis, Vector amplitudes) : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->size())
    throw BasisMismatch("amplitude count " + std::to_string(amplitudes_.size()) + " does not match basis size " +
                        std::to_string(basis_->size()));
}

Complex StateVector::amplitude(const std::vector<Charge>& internals) const {
  auto i = basis_->find(internals);
  return i ? amplitudes_(static_cast<Eigen::Index>(*i)) : Complex{0.0, 0.0};
}

std::vector<FusionTree> standard_basis(const ModelPtr& model, const std::vector<Charge>& leaves, Charge total) {
  if (leaves.empty()) throw InvalidArgument("standard_basis needs at least one leaf");
  const auto basis = Basis::make(model, leaves, total);
  std::vector<FusionTree> out;
  out.reserve(basis->size());
  for (std::size_t i = 0; i < basis->size(); ++i) out.push_back(basis->tree(i));
  return out;
}

StateVector basis_state(const ModelPtr& model, const std::vector<Charge>& leaves, Charge total, std::size_t index) {
  auto basis = Basis::make(model, leaves, total);
  if (index >= basis->size()) throw InvalidArgument("basis index out of range for " + describe(*basis));
  Vector v = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return {std::move(basis), std::move(v)};
}

StateVector random_state(const ModelPtr& model, const std::vector<Charge>& leaves, Charge total, Rng& rng) {
  auto basis = Basis::make(model, leaves, total);
  if (basis->size() == 0) throw InvalidArgument("empty fusion space " + describe(*basis));
  Vector v(static_cast<Eigen::Index>(basis->size()));
  for (auto& x : v) {
    const double re = rng.normal();
    const double im = rng.normal();
    x = Complex(re, im);
  }
  v.normalize();
  return {std::move(basis), std::move(v)};
}

StateVector vacuum_state(const ModelPtr& model) {
  auto basis = Basis::make(model, {}, kVacuum);
  return {std::move(basis), Vector::Ones(1)};
}

StateVector entangled_pair_state(const ModelPtr& model, Charge a) {
  model->check(a);
  return attach_pair(vacuum_state(model), 0, a);
}

StateVector attach_pair(const StateVector& state, int position, Charge a) {
  require_canonical(state, "attach_pair");
  const auto& m = state.model();
  m.check(a);
  const int n = state.num_leaves();
  if (position < 0 || position > n)
    throw InvalidArgument("attach_pair position " + std::to_string(position) + " outside [0, " + std::to_string(n) +
                          "]");
  const Charge abar = m.dual(a);
  std::vector<Charge> leaves = state.leaves();
  leaves.insert(leaves.begin() + position, {a, abar});
  const auto& src = state.basis();

  if (position == 0) {
    // Pair in front: chain becomes (a, 0, l0, y1, ...), already canonical.
    auto target = Basis::make(state.basis().model_ptr(), leaves, state.total());
    Vector v = Vector::Zero(static_cast<Eigen::Index>(target->size()));
    for (std::size_t i = 0; i < src.size(); ++i) {
      auto y = src.chain(i);
      std::vector<Charge> internals;
      if (n >= 1) {
        internals.push_back(kVacuum);
        internals.insert(internals.end(), y.begin(), y.end() - 1);
      }
      v(static_cast<Eigen::Index>(*target->find(internals))) = state.amplitudes()(static_cast<Eigen::Index>(i));
    }
    return {std::move(target), std::move(v)};
  }

  // Pair fused to vacuum at paired site `position`, then F-moved to canonical.
  auto paired = Basis::make(state.basis().model_ptr(), leaves, state.total(), position);
  Vector v = Vector::Zero(static_cast<Eigen::Index>(paired->size()));
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto y = src.chain(i);  // y[0..n-1]
    std::vector<Charge> full(y.begin(), y.begin() + position);
    full.push_back(kVacuum);
    full.push_back(y[position - 1]);
    full.insert(full.end(), y.begin() + position, y.end());
    std::vector<Charge> internals(full.begin() + 1, full.end() - 1);
    v(static_cast<Eigen::Index>(*paired->find(internals))) = state.amplitudes()(static_cast<Eigen::Index>(i));
  }
  return apply_f_move(StateVector(std::move(paired), std::move(v)), position, FMoveDirection::to_canonical);
}

SparseMatrix f_move_matrix(const Basis& canonical, const Basis& paired) {
  const int s = *paired.paired_site();
  const auto& m = canonical.model();
  const auto& l = canonical.leaves();
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    const auto y = canonical.chain(i);
    const Charge x = y[s - 1], e = y[s], z = y[s + 1];
    auto internals = canonical.internals(i);
    for (Charge p : m.products(l[s], l[s + 1])) {
      if (!m.fuses(x, p, z)) continue;
      internals[s - 1] = p;
      const auto j = paired.find(internals);
      if (!j) continue;
      entries.emplace_back(static_cast<Eigen::Index>(*j), static_cast<Eigen::Index>(i), m.f(x, l[s], l[s + 1], z, e, p));
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(paired.size()), static_cast<Eigen::Index>(canonical.size()));
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

StateVector apply_f_move(const StateVector& state, int site, FMoveDirection direction) {
  const auto& b = state.basis();
  const int n = state.num_leaves();
  if (site < 1 || site > n - 2)
    throw InvalidArgument("F-move site " + std::to_string(site) + " invalid for " + std::to_string(n) + " leaves");
  if (direction == FMoveDirection::to_paired) {
    require_canonical(state, "apply_f_move(to_paired)");
    auto paired = Basis::make(b.model_ptr(), b.leaves(), b.total(), site);
    Vector v = f_move_matrix(b, *paired) * state.amplitudes();
    return {std::move(paired), std::move(v)};
  }
  if (b.paired_site() != site) throw BasisMismatch("apply_f_move(to_canonical) expects a state paired at this site");
  auto canonical = Basis::make(b.model_ptr(), b.leaves(), b.total());
  Vector v = f_move_matrix(*canonical, b).adjoint() * state.amplitudes();
  return {std::move(canonical), std::move(v)};
}

BraidOperator braid_operator(const BasisPtr& canonical, int i, int sign) {
  const auto& b = *canonical;
  const auto& m = b.model();
  const int n = b.num_leaves();
  if (i < 0 || i + 1 >= n)
    throw InvalidArgument("braid position " + std::to_string(i) + " invalid for " + std::to_string(n) + " leaves");
  if (sign != 1 && sign != -1) throw InvalidArgument("braid sign must be +1 or -1");
  const Charge left = b.leaves()[i], right = b.leaves()[i + 1];
  auto factor = [&](Charge c) { return sign > 0 ? m.r(left, right, c) : std::conj(m.r(right, left, c)); };

  auto swapped_leaves = b.leaves();
  std::swap(swapped_leaves[i], swapped_leaves[i + 1]);
  auto target = Basis::make(b.model_ptr(), swapped_leaves, b.total());

  std::vector<Eigen::Triplet<Complex>> entries;
  if (i == 0) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      const auto j = target->find(b.internals(k));
      entries.emplace_back(static_cast<Eigen::Index>(*j), static_cast<Eigen::Index>(k), factor(b.chain(k)[1]));
    }
    SparseMatrix out(static_cast<Eigen::Index>(target->size()), static_cast<Eigen::Index>(b.size()));
    out.setFromTriplets(entries.begin(), entries.end());
    return {std::move(target), std::move(out)};
  }

  auto paired = Basis::make(b.model_ptr(), b.leaves(), b.total(), i);
  auto paired_swapped = Basis::make(b.model_ptr(), swapped_leaves, b.total(), i);
  for (std::size_t k = 0; k < paired->size(); ++k) {
    const auto j = paired_swapped->find(paired->internals(k));
    entries.emplace_back(static_cast<Eigen::Index>(*j), static_cast<Eigen::Index>(k), factor(paired->internals(k)[i - 1]));
  }
  SparseMatrix diag(static_cast<Eigen::Index>(paired_swapped->size()), static_cast<Eigen::Index>(paired->size()));
  diag.setFromTriplets(entries.begin(), entries.end());
  SparseMatrix back = f_move_matrix(*target, *paired_swapped).adjoint();
  SparseMatrix out = back * diag * f_move_matrix(b, *paired);
  return {std::move(target), std::move(out)};
}

StateVector apply_braid(const StateVector& state, int i, int sign) {
  require_canonical(state, "apply_braid");
  auto op = braid_operator(state.basis_ptr(), i, sign);
  Vector v = op.matrix * state.amplitudes();
  return {std::move(op.target), std::move(v)};
}

Complex inner(const StateVector& s1, const StateVector& s2) {
  if (!s1.basis().same_space(s2.basis())) throw BasisMismatch("inner product of states in different fusion spaces");
  return s1.amplitudes().dot(s2.amplitudes());
}

}  // namespace motqc
