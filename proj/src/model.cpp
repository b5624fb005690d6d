// model.cpp
#include "motqc/model.hpp"

#include <algorithm>
#include <cmath>

namespace motqc {

ModelData::ModelData(int rank)
    : labels(rank),
      dual(rank, 0),
      qdim(rank, 1.0),
      rank_(rank),
      fusion_(static_cast<std::size_t>(rank) * rank * rank, 0),
      f_(static_cast<std::size_t>(rank) * rank * rank * rank * rank * rank),
      r_(static_cast<std::size_t>(rank) * rank * rank) {}

AnyonModel::AnyonModel(ModelData data) : data_(std::move(data)) {
  const int n = data_.rank();
  if (n < 1) throw ModelError("model has no charges");
  if (static_cast<int>(data_.labels.size()) != n || static_cast<int>(data_.dual.size()) != n ||
      static_cast<int>(data_.qdim.size()) != n)
    throw ModelError("model tables have inconsistent sizes");

  products_.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (data_.fusion(a, b, c)) products_[static_cast<std::size_t>(a) * n + b].push_back(Charge{c});

  for (int a = 0; a < n; ++a) {
    const int ad = data_.dual[a];
    if (ad < 0 || ad >= n || data_.dual[ad] != a)
      throw ModelError("dual map is not an involution at charge " + data_.labels[a]);
    if (!(data_.qdim[a] > 0.0)) throw ModelError("non-positive quantum dimension for " + data_.labels[a]);
    if (std::abs(data_.qdim[a] - data_.qdim[ad]) > 1e-9)
      throw ModelError("d_a != d_abar for " + data_.labels[a]);
    const auto& vac = products_[static_cast<std::size_t>(a) * n + 0];
    const auto& vac2 = products_[a];
    if (vac.size() != 1 || vac[0].index != a || vac2.size() != 1 || vac2[0].index != a)
      throw ModelError("vacuum does not act as identity on " + data_.labels[a]);
    for (int b = 0; b < n; ++b) {
      if (data_.fusion(a, b, 0) != (b == ad))
        throw ModelError("vacuum channel of " + data_.labels[a] + " x " + data_.labels[b] +
                         " disagrees with dual map");
      if (products_[static_cast<std::size_t>(a) * n + b].empty())
        throw ModelError("empty fusion product " + data_.labels[a] + " x " + data_.labels[b]);
    }
  }
  if (data_.dual[0] != 0) throw ModelError("vacuum must be self-dual");
  if (std::abs(data_.qdim[0] - 1.0) > 1e-12) throw ModelError("d_0 must be 1");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (data_.labels[i] == data_.labels[j]) throw ModelError("duplicate charge label " + data_.labels[i]);
}

std::vector<Charge> AnyonModel::charges() const {
  std::vector<Charge> out;
  out.reserve(rank());
  for (int i = 0; i < rank(); ++i) out.push_back(Charge{i});
  return out;
}

Charge AnyonModel::charge(std::string_view label) const {
  for (int i = 0; i < rank(); ++i)
    if (data_.labels[i] == label) return Charge{i};
  if (auto it = data_.aliases.find(std::string(label)); it != data_.aliases.end()) return Charge{it->second};
  throw UnknownCharge("unknown charge '" + std::string(label) + "' in model " + name());
}

const std::string& AnyonModel::label(Charge c) const {
  check(c);
  return data_.labels[c.index];
}

void AnyonModel::check(Charge c) const {
  if (!contains(c)) throw UnknownCharge("charge index " + std::to_string(c.index) + " not in model " + name());
}

AnyonModel::FBlock AnyonModel::f_block(Charge a, Charge b, Charge c, Charge d) const {
  FBlock block;
  for (Charge e : products(a, b))
    if (fuses(e, c, d)) block.rows.push_back(e);
  for (Charge f : products(b, c))
    if (fuses(a, f, d)) block.cols.push_back(f);
  block.matrix.resize(static_cast<Eigen::Index>(block.rows.size()), static_cast<Eigen::Index>(block.cols.size()));
  for (std::size_t i = 0; i < block.rows.size(); ++i)
    for (std::size_t j = 0; j < block.cols.size(); ++j)
      block.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          f(a, b, c, d, block.rows[i], block.cols[j]);
  return block;
}

std::vector<Charge> fuse(const AnyonModel& model, Charge a, Charge b) {
  model.check(a);
  model.check(b);
  return model.products(a, b);
}

Complex f_symbol(const AnyonModel& model, Charge a, Charge b, Charge c, Charge d, Charge e, Charge f) {
  for (Charge x : {a, b, c, d, e, f}) model.check(x);
  return model.f(a, b, c, d, e, f);
}

Complex r_symbol(const AnyonModel& model, Charge a, Charge b, Charge c) {
  for (Charge x : {a, b, c}) model.check(x);
  if (!model.fuses(a, b, c))
    throw InvalidArgument(model.label(c) + " is not a fusion channel of " + model.label(a) + " x " +
                          model.label(b));
  return model.r(a, b, c);
}

Complex kappa(const AnyonModel& model, Charge a) {
  model.check(a);
  return model.qdim(a) * model.f(a, model.dual(a), a, a, kVacuum, kVacuum);
}

bool is_abelian(const AnyonModel& model, Charge c) {
  model.check(c);
  return model.qdim(c) < 1.0 + 1e-9;
}

Complex topological_spin(const AnyonModel& model, Charge a) {
  model.check(a);
  Complex sum = 0.0;
  for (Charge c : model.products(a, a)) sum += model.qdim(c) * model.r(a, a, c);
  return sum / model.qdim(a);
}

ConsistencyReport verify_consistency(const AnyonModel& model, double tolerance) {
  ConsistencyReport rep;
  rep.tolerance = tolerance;
  const auto cs = model.charges();

  for (Charge a : cs)
    for (Charge b : cs) {
      double sum = 0.0;
      for (Charge c : model.products(a, b)) sum += model.qdim(c);
      rep.qdim_residual = std::max(rep.qdim_residual, std::abs(model.qdim(a) * model.qdim(b) - sum));
      for (Charge c : model.products(a, b))
        rep.max_unitarity_residual = std::max(rep.max_unitarity_residual, std::abs(std::abs(model.r(a, b, c)) - 1.0));
    }

  for (Charge a : cs)
    for (Charge b : cs)
      for (Charge c : cs)
        for (Charge d : cs) {
          const auto block = model.f_block(a, b, c, d);
          if (block.rows.empty() && block.cols.empty()) continue;
          rep.max_unitarity_residual = std::max(rep.max_unitarity_residual, unitarity_residual(block.matrix));
        }

  // Pentagon:
  // [F^{fcd}_e]_{gl} [F^{abl}_e]_{fk} = sum_h [F^{abc}_g]_{fh} [F^{ahd}_e]_{gk} [F^{bcd}_k]_{hl}
  for (Charge a : cs)
    for (Charge b : cs)
      for (Charge c : cs)
        for (Charge d : cs)
          for (Charge f : model.products(a, b))
            for (Charge g : model.products(f, c))
              for (Charge e : model.products(g, d)) {
                for (Charge l : model.products(c, d))
                  for (Charge k : model.products(b, l)) {
                    if (!model.fuses(a, k, e)) continue;
                    const Complex lhs = model.f(f, c, d, e, g, l) * model.f(a, b, l, e, f, k);
                    Complex rhs = 0.0;
                    for (Charge h : model.products(b, c))
                      rhs += model.f(a, b, c, g, f, h) * model.f(a, h, d, e, g, k) * model.f(b, c, d, k, h, l);
                    rep.max_pentagon_residual = std::max(rep.max_pentagon_residual, std::abs(lhs - rhs));
                  }
              }

  // Hexagons, both chiralities:
  // R^{ca}_e [F^{acb}_d]_{eg} R^{cb}_g = sum_f [F^{cab}_d]_{ef} R^{cf}_d [F^{abc}_d]_{fg}
  for (Charge a : cs)
    for (Charge b : cs)
      for (Charge c : cs)
        for (Charge d : cs)
          for (Charge e : model.products(c, a))
            for (Charge g : model.products(c, b)) {
              if (!model.fuses(e, b, d) || !model.fuses(a, g, d)) continue;
              const Complex fl = model.f(a, c, b, d, e, g);
              const Complex lhs = model.r(c, a, e) * fl * model.r(c, b, g);
              const Complex lhs_inv = std::conj(model.r(a, c, e)) * fl * std::conj(model.r(b, c, g));
              Complex rhs = 0.0;
              Complex rhs_inv = 0.0;
              for (Charge f : model.products(a, b)) {
                const Complex ff = model.f(c, a, b, d, e, f) * model.f(a, b, c, d, f, g);
                rhs += ff * model.r(c, f, d);
                rhs_inv += ff * std::conj(model.r(f, c, d));
              }
              rep.max_hexagon_residual =
                  std::max({rep.max_hexagon_residual, std::abs(lhs - rhs), std::abs(lhs_inv - rhs_inv)});
            }

  for (Charge a : cs) {
    const Charge ad = model.dual(a);
    const double da2 = model.qdim(a) * model.qdim(a);
    for (Charge e : model.products(a, ad)) {
      const double p = std::norm(model.f(a, ad, a, a, e, kVacuum));
      rep.pair_probability_residual = std::max(rep.pair_probability_residual, std::abs(p - model.qdim(e) / da2));
    }
  }

  rep.pass = rep.max_pentagon_residual < tolerance && rep.max_hexagon_residual < tolerance &&
             rep.max_unitarity_residual < tolerance && rep.qdim_residual < tolerance &&
             rep.pair_probability_residual < tolerance;
  return rep;
}

}  // namespace motqc
