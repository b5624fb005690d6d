// trace.cpp
#include "motqc/trace.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace motqc {
namespace {

std::string pair_text(LeafPair p) { return std::to_string(p.first) + ":" + std::to_string(p.second); }

}  // namespace

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) { return format_real(z.real()) + "," + format_real(z.imag()); }

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ParseError("not a number: '" + s + "'");
  return v;
}

Complex parse_complex(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw ParseError("not a complex number: '" + s + "'");
  return {parse_real(s.substr(0, comma)), parse_real(s.substr(comma + 1))};
}

void TraceWriter::trial(long index) {
  logp_ = 0.0;
  out_ << "trial index=" << index << "\n";
}

void TraceWriter::measurement(const MeasurementOutcome& m) {
  logp_ += std::log(m.probability);
  out_ << "measure pair=" << pair_text(m.pair) << " routing=" << to_string(m.routing)
       << " charge=" << model_.label(m.charge) << " p=" << format_real(m.probability) << " logp=" << format_real(logp_)
       << "\n";
}

void TraceWriter::forced(const MeasurementRecord& rec) {
  for (const auto& m : rec.measurements) measurement(m);
  out_ << "forced target=" << pair_text(rec.target_pair) << " recovery=" << pair_text(rec.recovery_pair)
       << " attempts=" << rec.attempts << " outcomes=";
  for (std::size_t i = 0; i < rec.outcomes.size(); ++i) out_ << (i ? "," : "") << model_.label(rec.outcomes[i]);
  out_ << " p=" << format_real(rec.trajectory_probability) << " phase=" << format_complex(rec.phase) << "\n";
}

void TraceWriter::braid(const BraidRecord& rec, int step, const Quad& quad) {
  for (const auto& s : rec.steps) forced(s);
  out_ << "braid step=" << step << " quad=" << quad[0] << "," << quad[1] << "," << quad[2] << "," << quad[3]
       << " direction=" << to_string(rec.direction) << " phase=" << format_complex(rec.extracted_phase)
       << " curl=" << format_complex(rec.isotopy.factor) << "\n";
}

const std::string& TraceLine::at(const std::string& key) const {
  auto it = fields.find(key);
  if (it == fields.end()) throw ParseError("trace line '" + kind + "' has no field " + key);
  return it->second;
}

std::vector<TraceLine> parse_trace(std::istream& in) {
  std::vector<TraceLine> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream ss(line);
    TraceLine t;
    if (!(ss >> t.kind)) continue;
    for (std::string tok; ss >> tok;) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ParseError("trace line " + std::to_string(number) + ": expected key=value, got '" + tok + "'");
      t.fields[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace motqc
