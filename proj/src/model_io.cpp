// model_io.cpp
//
// Line-oriented model file. '#' starts a comment; tokens are whitespace separated.
//
//   model   <name>
//   meta    <key> <value...>
//   charges <label> <label> ...          first label is the vacuum
//   alias   <alias> <label>
//   dual    <a> <abar>
//   qdim    <a> <value>
//   fuse    <a> <b> -> <c> <c> ...
//   F       <a> <b> <c> <d> <e> <f> <re> <im>
//   R       <a> <b> <c> <re> <im>
//
// Unlisted fusions are forbidden, unlisted F/R entries are zero.
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "motqc/model.hpp"

namespace motqc {
namespace {

struct LineReader {
  int line = 0;
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("model file line " + std::to_string(line) + ": " + msg);
  }
};

double parse_real(const LineReader& r, const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    r.fail("not a number: '" + tok + "'");
  }
  if (used != tok.size()) r.fail("not a number: '" + tok + "'");
  return v;
}

}  // namespace

ModelData parse_model(std::istream& in) {
  LineReader reader;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> row_line;
  std::string line;
  std::vector<std::string> labels;
  while (std::getline(in, line)) {
    ++reader.line;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks[0] == "charges") {
      if (!labels.empty()) reader.fail("duplicate 'charges' line");
      labels.assign(toks.begin() + 1, toks.end());
      if (labels.empty()) reader.fail("'charges' needs at least the vacuum");
      continue;
    }
    rows.push_back(std::move(toks));
    row_line.push_back(reader.line);
  }
  if (labels.empty()) throw ParseError("model file has no 'charges' line");

  const int n = static_cast<int>(labels.size());
  ModelData m(n);
  m.labels = labels;
  std::vector<bool> have_dual(n, false), have_qdim(n, false);

  auto index_of = [&](const std::string& label) {
    for (int i = 0; i < n; ++i)
      if (labels[i] == label) return i;
    if (auto it = m.aliases.find(label); it != m.aliases.end()) return it->second;
    reader.fail("unknown charge '" + label + "'");
  };
  auto expect = [&](const std::vector<std::string>& t, std::size_t count) {
    if (t.size() != count) reader.fail("'" + t[0] + "' expects " + std::to_string(count - 1) + " fields");
  };

  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& t = rows[k];
    reader.line = row_line[k];
    const std::string& key = t[0];
    if (key == "model") {
      expect(t, 2);
      m.name = t[1];
    } else if (key == "meta") {
      if (t.size() < 3) reader.fail("'meta' expects a key and a value");
      std::string value = t[2];
      for (std::size_t i = 3; i < t.size(); ++i) value += " " + t[i];
      m.metadata[t[1]] = value;
    } else if (key == "alias") {
      expect(t, 3);
      m.aliases[t[1]] = index_of(t[2]);
    } else if (key == "dual") {
      expect(t, 3);
      const int a = index_of(t[1]);
      m.dual[a] = index_of(t[2]);
      have_dual[a] = true;
    } else if (key == "qdim") {
      expect(t, 3);
      const int a = index_of(t[1]);
      m.qdim[a] = parse_real(reader, t[2]);
      have_qdim[a] = true;
    } else if (key == "fuse") {
      if (t.size() < 5 || t[3] != "->") reader.fail("expected 'fuse a b -> c ...'");
      const int a = index_of(t[1]), b = index_of(t[2]);
      for (std::size_t i = 4; i < t.size(); ++i) m.set_fusion(a, b, index_of(t[i]));
    } else if (key == "F") {
      expect(t, 9);
      int idx[6];
      for (int i = 0; i < 6; ++i) idx[i] = index_of(t[1 + i]);
      m.f(idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]) = {parse_real(reader, t[7]), parse_real(reader, t[8])};
    } else if (key == "R") {
      expect(t, 6);
      m.r(index_of(t[1]), index_of(t[2]), index_of(t[3])) = {parse_real(reader, t[4]), parse_real(reader, t[5])};
    } else {
      reader.fail("unknown keyword '" + key + "'");
    }
  }
  for (int a = 0; a < n; ++a) {
    if (!have_dual[a]) throw ParseError("model file: no dual given for charge " + labels[a]);
    if (!have_qdim[a]) throw ParseError("model file: no qdim given for charge " + labels[a]);
  }
  if (m.name.empty()) m.name = "custom";
  return m;
}

void write_model(std::ostream& out, const AnyonModel& model) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  const auto L = [&](Charge c) -> const std::string& { return model.label(c); };
  out << "model " << model.name() << "\n";
  for (const auto& [k, v] : model.metadata()) out << "meta " << k << " " << v << "\n";
  out << "charges";
  for (Charge c : model.charges()) out << " " << L(c);
  out << "\n";
  for (const auto& [alias, idx] : model.data().aliases) out << "alias " << alias << " " << L(Charge{idx}) << "\n";
  for (Charge c : model.charges()) out << "dual " << L(c) << " " << L(model.dual(c)) << "\n";
  for (Charge c : model.charges()) out << "qdim " << L(c) << " " << model.qdim(c) << "\n";
  for (Charge a : model.charges())
    for (Charge b : model.charges()) {
      out << "fuse " << L(a) << " " << L(b) << " ->";
      for (Charge c : model.products(a, b)) out << " " << L(c);
      out << "\n";
    }
  const auto all = model.charges();
  for (Charge a : all)
    for (Charge b : all)
      for (Charge c : all)
        for (Charge d : all)
          for (Charge e : all)
            for (Charge f : all) {
              const Complex v = model.f(a, b, c, d, e, f);
              if (v == Complex{}) continue;
              out << "F " << L(a) << " " << L(b) << " " << L(c) << " " << L(d) << " " << L(e) << " " << L(f) << " "
                  << v.real() << " " << v.imag() << "\n";
            }
  for (Charge a : all)
    for (Charge b : all)
      for (Charge c : model.products(a, b)) {
        const Complex v = model.r(a, b, c);
        out << "R " << L(a) << " " << L(b) << " " << L(c) << " " << v.real() << " " << v.imag() << "\n";
      }
  out.precision(old_precision);
}

ModelPtr load_model_file(const std::string& path, double tolerance) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file " + path);
  auto model = std::make_shared<const AnyonModel>(parse_model(in));
  const auto report = verify_consistency(*model, tolerance);
  if (!report.pass) {
    std::ostringstream msg;
    msg << "model " << model->name() << " fails consistency: pentagon " << report.max_pentagon_residual
        << ", hexagon " << report.max_hexagon_residual << ", unitarity " << report.max_unitarity_residual
        << ", qdim " << report.qdim_residual;
    throw ModelError(msg.str());
  }
  return model;
}

}  // namespace motqc
