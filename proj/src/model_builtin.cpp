// model_builtin.cpp
//
// Fibonacci and Ising ship as closed-form tables. SU(2)_k is generated from
// the q-deformed Racah formula with [n] = sin(n pi/(k+2)) / sin(pi/(k+2)),
// i.e. q = exp(i pi/(k+2)); spins are carried doubled (j2 = 2j) so every
// label is an integer.
#include <cmath>
#include <numbers>

#include "motqc/model.hpp"

namespace motqc {
namespace {

constexpr double kPi = std::numbers::pi;

Complex phase(double turns_of_pi) { return std::polar(1.0, turns_of_pi * kPi); }

// Every F-symbol with a vacuum leg is 1 on its single admissible entry.
void fill_trivial_f(ModelData& m) {
  const int n = m.rank();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (a != 0 && b != 0 && c != 0) continue;
          for (int e = 0; e < n; ++e)
            for (int f = 0; f < n; ++f)
              if (m.fusion(a, b, e) && m.fusion(e, c, d) && m.fusion(b, c, f) && m.fusion(a, f, d))
                m.f(a, b, c, d, e, f) = 1.0;
        }
  for (int a = 0; a < n; ++a) {
    m.r(0, a, a) = 1.0;
    m.r(a, 0, a) = 1.0;
  }
}

ModelData fibonacci() {
  ModelData m(2);
  m.name = "fibonacci";
  m.labels = {"0", "1"};
  m.aliases = {{"I", 0}, {"tau", 1}};
  m.dual = {0, 1};
  const double phi = std::numbers::phi;
  m.qdim = {1.0, phi};
  m.set_fusion(0, 0, 0);
  m.set_fusion(0, 1, 1);
  m.set_fusion(1, 0, 1);
  m.set_fusion(1, 1, 0);
  m.set_fusion(1, 1, 1);
  fill_trivial_f(m);
  m.f(1, 1, 1, 1, 0, 0) = 1.0 / phi;
  m.f(1, 1, 1, 1, 0, 1) = 1.0 / std::sqrt(phi);
  m.f(1, 1, 1, 1, 1, 0) = 1.0 / std::sqrt(phi);
  m.f(1, 1, 1, 1, 1, 1) = -1.0 / phi;
  m.f(1, 1, 1, 0, 1, 1) = 1.0;
  m.r(1, 1, 0) = phase(-4.0 / 5.0);
  m.r(1, 1, 1) = phase(3.0 / 5.0);
  m.metadata = {{"gauge", "real orthogonal F"},
                {"chirality", "R^{11}_0 = exp(-4 pi i/5)"},
                {"kappa_1", "+1"}};
  return m;
}

ModelData ising() {
  ModelData m(3);
  m.name = "ising";
  m.labels = {"0", "1/2", "1"};
  m.aliases = {{"I", 0}, {"sigma", 1}, {"psi", 2}};
  m.dual = {0, 1, 2};
  m.qdim = {1.0, std::numbers::sqrt2, 1.0};
  for (int a = 0; a < 3; ++a) {
    m.set_fusion(0, a, a);
    m.set_fusion(a, 0, a);
  }
  m.set_fusion(1, 1, 0);
  m.set_fusion(1, 1, 2);
  m.set_fusion(1, 2, 1);
  m.set_fusion(2, 1, 1);
  m.set_fusion(2, 2, 0);
  fill_trivial_f(m);
  // Remaining admissible F with no vacuum leg.
  const double s = 1.0 / std::numbers::sqrt2;
  m.f(1, 1, 1, 1, 0, 0) = s;
  m.f(1, 1, 1, 1, 0, 2) = s;
  m.f(1, 1, 1, 1, 2, 0) = s;
  m.f(1, 1, 1, 1, 2, 2) = -s;
  m.f(1, 2, 1, 2, 1, 1) = -1.0;
  m.f(2, 1, 2, 1, 1, 1) = -1.0;
  m.f(1, 1, 2, 0, 2, 1) = 1.0;
  m.f(2, 1, 1, 0, 1, 2) = 1.0;
  m.f(1, 2, 2, 1, 1, 0) = 1.0;
  m.f(2, 2, 1, 1, 0, 1) = 1.0;
  m.f(1, 2, 1, 0, 1, 1) = 1.0;
  m.f(1, 1, 2, 2, 0, 1) = 1.0;
  m.f(2, 1, 1, 2, 1, 0) = 1.0;
  m.f(2, 2, 2, 2, 0, 0) = 1.0;
  m.r(1, 1, 0) = phase(-1.0 / 8.0);
  m.r(1, 1, 2) = phase(3.0 / 8.0);
  m.r(1, 2, 1) = Complex(0.0, -1.0);
  m.r(2, 1, 1) = Complex(0.0, -1.0);
  m.r(2, 2, 0) = -1.0;
  m.metadata = {{"gauge", "real orthogonal F"},
                {"chirality", "R^{sigma sigma}_0 = exp(-pi i/8)"},
                {"kappa_1/2", "+1"}};
  return m;
}

class QNumbers {
 public:
  explicit QNumbers(int k) : fact_(2 * k + 8, 1.0) {
    for (std::size_t n = 1; n < fact_.size(); ++n)
      fact_[n] = fact_[n - 1] * std::sin(static_cast<double>(n) * kPi / (k + 2)) / std::sin(kPi / (k + 2));
  }
  double integer(int n) const { return n == 0 ? 0.0 : fact_[n] / fact_[n - 1]; }
  double factorial(int n) const { return fact_.at(static_cast<std::size_t>(n)); }

 private:
  std::vector<double> fact_;
};

bool admissible(int a2, int b2, int c2, int k) {
  return (a2 + b2 + c2) % 2 == 0 && c2 <= a2 + b2 && c2 >= std::abs(a2 - b2) && a2 + b2 + c2 <= 2 * k;
}

double triangle(const QNumbers& q, int a2, int b2, int c2) {
  return std::sqrt(q.factorial((a2 + b2 - c2) / 2) * q.factorial((a2 - b2 + c2) / 2) *
                   q.factorial((-a2 + b2 + c2) / 2) / q.factorial((a2 + b2 + c2) / 2 + 1));
}

// {j1 j2 j3; j4 j5 j6}_q with triads (j1 j2 j3), (j1 j5 j6), (j4 j2 j6), (j4 j5 j3).
double six_j(const QNumbers& q, int j1, int j2, int j3, int j4, int j5, int j6) {
  const int t1 = (j1 + j2 + j3) / 2, t2 = (j1 + j5 + j6) / 2, t3 = (j4 + j2 + j6) / 2, t4 = (j4 + j5 + j3) / 2;
  const int s1 = (j1 + j2 + j4 + j5) / 2, s2 = (j2 + j3 + j5 + j6) / 2, s3 = (j3 + j1 + j6 + j4) / 2;
  const int zmin = std::max({t1, t2, t3, t4});
  const int zmax = std::min({s1, s2, s3});
  double sum = 0.0;
  for (int z = zmin; z <= zmax; ++z) {
    const double den = q.factorial(z - t1) * q.factorial(z - t2) * q.factorial(z - t3) * q.factorial(z - t4) *
                       q.factorial(s1 - z) * q.factorial(s2 - z) * q.factorial(s3 - z);
    sum += ((z % 2) ? -1.0 : 1.0) * q.factorial(z + 1) / den;
  }
  return triangle(q, j1, j2, j3) * triangle(q, j1, j5, j6) * triangle(q, j4, j2, j6) * triangle(q, j4, j5, j3) * sum;
}

std::string spin_label(int j2) { return j2 % 2 == 0 ? std::to_string(j2 / 2) : std::to_string(j2) + "/2"; }

ModelData su2_level(int k) {
  const int n = k + 1;
  ModelData m(n);
  m.name = "su2_" + std::to_string(k);
  m.metadata = {{"k", std::to_string(k)},
                {"gauge", "real orthogonal F from the q-Racah formula"},
                {"chirality", "R^{ab}_c = (-1)^{c-a-b} exp(i pi (c(c+1)-a(a+1)-b(b+1))/(k+2))"}};
  QNumbers q(k);
  for (int j2 = 0; j2 < n; ++j2) {
    m.labels[j2] = spin_label(j2);
    m.dual[j2] = j2;
    m.qdim[j2] = q.integer(j2 + 1);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (admissible(a, b, c, k)) m.set_fusion(a, b, c);

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e) {
            if (!m.fusion(a, b, e) || !m.fusion(e, c, d)) continue;
            for (int f = 0; f < n; ++f) {
              if (!m.fusion(b, c, f) || !m.fusion(a, f, d)) continue;
              const double sign = ((a + b + c + d) / 2) % 2 ? -1.0 : 1.0;
              m.f(a, b, c, d, e, f) =
                  sign * std::sqrt(q.integer(e + 1) * q.integer(f + 1)) * six_j(q, a, b, e, c, d, f);
            }
          }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (!m.fusion(a, b, c)) continue;
        const double casimir = (c * (c + 2) - a * (a + 2) - b * (b + 2)) / 4.0;
        const double sign = ((c - a - b) / 2) % 2 ? -1.0 : 1.0;
        m.r(a, b, c) = sign * phase(casimir / (k + 2));
      }
  return m;
}

}  // namespace

ModelPtr load_builtin(std::string_view name, std::optional<int> k) {
  if (name == "fibonacci") return std::make_shared<const AnyonModel>(fibonacci());
  if (name == "ising") return std::make_shared<const AnyonModel>(ising());
  if (name == "su2_k" || name == "su2") {
    if (!k) throw InvalidArgument("su2_k requires a level k");
    if (*k < 2) throw InvalidArgument("su2_k requires k >= 2, got " + std::to_string(*k));
    return std::make_shared<const AnyonModel>(su2_level(*k));
  }
  throw InvalidArgument("unknown built-in model '" + std::string(name) + "'");
}

}  // namespace motqc
