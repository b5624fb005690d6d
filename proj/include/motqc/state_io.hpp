// state_io.hpp
//
// JSON dump of a state: model name, leaf labels, total, optional paired site
// and one row per basis tree (internal labels, re, im). Doubles are written in
// shortest round-trip form, so write/read is bit-exact.
#ifndef MOTQC_STATE_IO_HPP
#define MOTQC_STATE_IO_HPP

#include <iosfwd>
#include <string>

#include "motqc/fusion_space.hpp"

namespace motqc {

void write_state(std::ostream& out, const StateVector& state);
std::string state_to_string(const StateVector& state);

/// Rows may come in any order; trees without a row get amplitude 0.
/// Throws ParseError on malformed input or a model name mismatch.
StateVector read_state(std::istream& in, const ModelPtr& model);
StateVector state_from_string(const std::string& text, const ModelPtr& model);

}  // namespace motqc

#endif  // MOTQC_STATE_IO_HPP
