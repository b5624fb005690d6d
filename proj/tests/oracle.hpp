// oracle.hpp
//
// Brute-force reference computations that only read F and R symbols from the
// model. They share no code with the fusion-space or measurement layers.
#ifndef MOTQC_TESTS_ORACLE_HPP
#define MOTQC_TESTS_ORACLE_HPP

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "motqc/fusion_space.hpp"

namespace oracle {

using motqc::AnyonModel;
using motqc::Charge;
using motqc::Complex;

inline const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

/// Number of left-canonical chains with these leaves and total.
inline long count_chains(const AnyonModel& m, const std::vector<Charge>& leaves, Charge total) {
  if (leaves.empty()) return total == motqc::kVacuum ? 1 : 0;
  std::vector<long> ways(static_cast<std::size_t>(m.rank()), 0);
  ways[static_cast<std::size_t>(leaves[0].index)] = 1;
  for (std::size_t i = 1; i < leaves.size(); ++i) {
    std::vector<long> next(ways.size(), 0);
    for (int y = 0; y < m.rank(); ++y)
      for (int z = 0; z < m.rank(); ++z)
        if (m.fuses(Charge{y}, leaves[i], Charge{z})) next[static_cast<std::size_t>(z)] += ways[static_cast<std::size_t>(y)];
    ways = next;
  }
  return ways[static_cast<std::size_t>(total.index)];
}

/// Amplitudes keyed by full chain [l0, y1, ..., total].
using ChainAmps = std::map<std::vector<Charge>, Complex>;

inline ChainAmps chain_amplitudes(const motqc::StateVector& s) {
  ChainAmps out;
  for (std::size_t i = 0; i < s.basis().size(); ++i) out[s.basis().chain(i)] = s.amplitudes()(static_cast<Eigen::Index>(i));
  return out;
}

inline motqc::Vector to_vector(const ChainAmps& amps, const motqc::Basis& basis) {
  motqc::Vector v = motqc::Vector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto it = amps.find(basis.chain(i));
    if (it != amps.end()) v(static_cast<Eigen::Index>(i)) = it->second;
  }
  return v;
}

/// Charge distribution of adjacent leaves (s, s+1): F-move the chain by hand,
/// with |(x l_s)_e l_{s+1}; z> = sum_p F^{x l_s l_{s+1}}_z[e, p] |x (l_s l_{s+1})_p; z>.
inline std::map<Charge, double> adjacent_pair_distribution(const motqc::StateVector& s, int site) {
  const auto& m = s.model();
  const auto& l = s.leaves();
  std::map<Charge, double> out;
  if (site == 0) {
    for (const auto& [chain, amp] : chain_amplitudes(s)) out[chain[1]] += std::norm(amp);
    return out;
  }
  std::map<std::pair<std::vector<Charge>, Charge>, Complex> paired;
  for (const auto& [chain, amp] : chain_amplitudes(s)) {
    const Charge x = chain[static_cast<std::size_t>(site - 1)], e = chain[static_cast<std::size_t>(site)],
                 z = chain[static_cast<std::size_t>(site + 1)];
    auto rest = chain;
    rest.erase(rest.begin() + site);
    for (Charge p : m.charges())
      paired[{rest, p}] += amp * m.f(x, l[static_cast<std::size_t>(site)], l[static_cast<std::size_t>(site + 1)], z, e, p);
  }
  for (const auto& [key, amp] : paired) out[key.second] += std::norm(amp);
  return out;
}

/// Exchange of leaves (i, i+1) on a register whose leaves all carry the same
/// charge, as an explicit dense matrix on the canonical basis.
inline motqc::Matrix dense_braid(const motqc::Basis& b, int i, int sign) {
  const auto& m = b.model();
  const auto& l = b.leaves();
  const auto n = static_cast<Eigen::Index>(b.size());
  motqc::Matrix out = motqc::Matrix::Zero(n, n);
  auto r = [&](Charge c) {
    const Complex v = m.r(l[static_cast<std::size_t>(i)], l[static_cast<std::size_t>(i + 1)], c);
    return sign > 0 ? v : std::conj(v);
  };
  for (Eigen::Index col = 0; col < n; ++col) {
    const auto cin = b.chain(static_cast<std::size_t>(col));
    for (Eigen::Index row = 0; row < n; ++row) {
      const auto cout = b.chain(static_cast<std::size_t>(row));
      bool same_elsewhere = true;
      for (std::size_t k = 0; k < cin.size(); ++k)
        if (static_cast<int>(k) != i && cin[k] != cout[k]) same_elsewhere = false;
      if (!same_elsewhere) continue;
      if (i == 0) {
        if (cin[1] == cout[1]) out(row, col) = r(cin[1]);
        continue;
      }
      const Charge x = cin[static_cast<std::size_t>(i - 1)], z = cin[static_cast<std::size_t>(i + 1)];
      const Charge e = cin[static_cast<std::size_t>(i)], e2 = cout[static_cast<std::size_t>(i)];
      const Charge li = l[static_cast<std::size_t>(i)], lj = l[static_cast<std::size_t>(i + 1)];
      Complex sum{};
      for (Charge p : m.charges())
        sum += std::conj(m.f(x, lj, li, z, e2, p)) * r(p) * m.f(x, li, lj, z, e, p);
      out(row, col) = sum;
    }
  }
  return out;
}

inline double overlap(const motqc::Vector& a, const motqc::Vector& b) { return std::abs(a.dot(b)); }

}  // namespace oracle

#endif  // MOTQC_TESTS_ORACLE_HPP
