// trace.hpp
//
// Line-oriented log of measurements, forced measurements and braids. Each
// line is "<kind> key=value ...":
//
//   trial   index=<n>
//   measure pair=<i>:<j> routing=<over|under> charge=<label> p=<real> logp=<cumulative ln p>
//   forced  target=<i>:<j> recovery=<i>:<j> attempts=<n> outcomes=<l,l,...> p=<real> phase=<re>,<im>
//   braid   step=<n> quad=<a>,<b>,<c>,<d> direction=<positive|inverse> phase=<re>,<im> curl=<re>,<im>
//
// Reals are written with 17 significant digits, so a parsed log reproduces
// the values exactly.
#ifndef MOTQC_TRACE_HPP
#define MOTQC_TRACE_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "motqc/teleport.hpp"

namespace motqc {

std::string format_real(double x);
std::string format_complex(Complex z);
double parse_real(const std::string& s);
Complex parse_complex(const std::string& s);

class TraceWriter {
 public:
  TraceWriter(std::ostream& out, const AnyonModel& model) : out_(out), model_(model) {}

  /// Starts a new trajectory; resets the cumulative log-probability.
  void trial(long index);
  void measurement(const MeasurementOutcome& m);
  /// Every measurement of the record, then its summary line.
  void forced(const MeasurementRecord& rec);
  /// The three forced measurements, then the braid summary line.
  void braid(const BraidRecord& rec, int step, const Quad& quad);

  double log_probability() const { return logp_; }

 private:
  std::ostream& out_;
  const AnyonModel& model_;
  double logp_ = 0.0;
};

struct TraceLine {
  std::string kind;
  std::map<std::string, std::string> fields;
  const std::string& at(const std::string& key) const;
};

/// Throws ParseError on a malformed line.
std::vector<TraceLine> parse_trace(std::istream& in);

}  // namespace motqc

#endif  // MOTQC_TRACE_HPP
