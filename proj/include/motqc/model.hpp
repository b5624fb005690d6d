// model.hpp
#ifndef MOTQC_MODEL_HPP
#define MOTQC_MODEL_HPP

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motqc/core.hpp"

namespace motqc {

/// Raw tables of a multiplicity-free anyon model, indexed by charge index.
/// Charge 0 is the vacuum. Unset F/R entries are zero.
class ModelData {
 public:
  ModelData() = default;
  explicit ModelData(int rank);

  int rank() const { return rank_; }

  std::string name;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> labels;
  std::map<std::string, int> aliases;
  std::vector<int> dual;
  std::vector<double> qdim;

  bool fusion(int a, int b, int c) const { return fusion_[idx3(a, b, c)] != 0; }
  void set_fusion(int a, int b, int c, bool allowed = true) { fusion_[idx3(a, b, c)] = allowed ? 1 : 0; }

  Complex f(int a, int b, int c, int d, int e, int f) const { return f_[idx6(a, b, c, d, e, f)]; }
  Complex& f(int a, int b, int c, int d, int e, int f) { return f_[idx6(a, b, c, d, e, f)]; }
  Complex r(int a, int b, int c) const { return r_[idx3(a, b, c)]; }
  Complex& r(int a, int b, int c) { return r_[idx3(a, b, c)]; }

 private:
  std::size_t idx3(int a, int b, int c) const {
    return (static_cast<std::size_t>(a) * rank_ + b) * rank_ + c;
  }
  std::size_t idx6(int a, int b, int c, int d, int e, int f) const {
    std::size_t i = a;
    for (int x : {b, c, d, e, f}) i = i * rank_ + x;
    return i;
  }

  int rank_ = 0;
  std::vector<unsigned char> fusion_;
  std::vector<Complex> f_;
  std::vector<Complex> r_;
};

/// Immutable anyon model. Construction checks the structural invariants
/// (vacuum, duals, multiplicity-free fusion, positive dimensions); the
/// pentagon/hexagon data are checked separately by verify_consistency.
class AnyonModel {
 public:
  explicit AnyonModel(ModelData data);

  const std::string& name() const { return data_.name; }
  int rank() const { return data_.rank(); }
  std::vector<Charge> charges() const;

  /// Looks up a charge by label or alias. Throws UnknownCharge.
  Charge charge(std::string_view label) const;
  const std::string& label(Charge c) const;
  bool contains(Charge c) const { return c.index >= 0 && c.index < rank(); }
  void check(Charge c) const;

  Charge dual(Charge a) const { return Charge{data_.dual[a.index]}; }
  double qdim(Charge a) const { return data_.qdim[a.index]; }
  bool fuses(Charge a, Charge b, Charge c) const { return data_.fusion(a.index, b.index, c.index); }
  /// Fusion products in index order.
  const std::vector<Charge>& products(Charge a, Charge b) const {
    return products_[static_cast<std::size_t>(a.index) * rank() + b.index];
  }

  /// [F^{abc}_d]_{ef}; zero when any vertex is inadmissible. No range checks.
  Complex f(Charge a, Charge b, Charge c, Charge d, Charge e, Charge f) const {
    return data_.f(a.index, b.index, c.index, d.index, e.index, f.index);
  }
  /// R^{ab}_c; zero when c is not a fusion product. No range checks.
  Complex r(Charge a, Charge b, Charge c) const { return data_.r(a.index, b.index, c.index); }

  /// F-matrix block with its row labels (e) and column labels (f).
  struct FBlock {
    std::vector<Charge> rows;
    std::vector<Charge> cols;
    Matrix matrix;
  };
  FBlock f_block(Charge a, Charge b, Charge c, Charge d) const;

  const std::map<std::string, std::string>& metadata() const { return data_.metadata; }
  const ModelData& data() const { return data_; }

 private:
  ModelData data_;
  std::vector<std::vector<Charge>> products_;
};

using ModelPtr = std::shared_ptr<const AnyonModel>;

struct ConsistencyReport {
  double max_pentagon_residual = 0.0;
  double max_hexagon_residual = 0.0;
  double max_unitarity_residual = 0.0;
  double qdim_residual = 0.0;
  /// max over a, e of | |[F^{a abar a}_a]_{e0}|^2 - d_e/d_a^2 |
  double pair_probability_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline constexpr double kDefaultConsistencyTolerance = 1e-10;

/// Built-in models: "fibonacci", "ising", "su2_k" (needs k >= 2).
ModelPtr load_builtin(std::string_view name, std::optional<int> k = std::nullopt);

std::vector<Charge> fuse(const AnyonModel& model, Charge a, Charge b);
Complex f_symbol(const AnyonModel& model, Charge a, Charge b, Charge c, Charge d, Charge e, Charge f);
/// Throws InvalidArgument when c is not in a x b.
Complex r_symbol(const AnyonModel& model, Charge a, Charge b, Charge c);
/// d_a [F^{a abar a}_a]_{00}
Complex kappa(const AnyonModel& model, Charge a);
bool is_abelian(const AnyonModel& model, Charge c);
/// theta_a = d_a^-1 sum_c d_c R^{aa}_c
Complex topological_spin(const AnyonModel& model, Charge a);

ConsistencyReport verify_consistency(const AnyonModel& model,
                                     double tolerance = kDefaultConsistencyTolerance);

// Declarative model file.
ModelData parse_model(std::istream& in);
void write_model(std::ostream& out, const AnyonModel& model);
/// Parses, builds and verifies; throws ParseError / ModelError on failure.
ModelPtr load_model_file(const std::string& path, double tolerance = kDefaultConsistencyTolerance);

}  // namespace motqc

#endif  // MOTQC_MODEL_HPP
