// state_io.cpp
#include "motqc/state_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace motqc {
namespace {

using nlohmann::json;

std::vector<Charge> labels_to_charges(const AnyonModel& model, const json& arr) {
  std::vector<Charge> out;
  for (const auto& v : arr) out.push_back(model.charge(v.get<std::string>()));
  return out;
}

json charges_to_labels(const AnyonModel& model, const std::vector<Charge>& cs) {
  json arr = json::array();
  for (Charge c : cs) arr.push_back(model.label(c));
  return arr;
}

}  // namespace

void write_state(std::ostream& out, const StateVector& state) { out << state_to_string(state) << "\n"; }

std::string state_to_string(const StateVector& state) {
  const auto& b = state.basis();
  const auto& m = b.model();
  json j;
  j["model"] = m.name();
  j["leaves"] = charges_to_labels(m, b.leaves());
  j["total"] = m.label(b.total());
  j["paired_site"] = b.paired_site() ? json(*b.paired_site()) : json(nullptr);
  json rows = json::array();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const Complex a = state.amplitudes()(static_cast<Eigen::Index>(i));
    rows.push_back({{"internals", charges_to_labels(m, b.internals(i))}, {"re", a.real()}, {"im", a.imag()}});
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

StateVector read_state(std::istream& in, const ModelPtr& model) {
  std::stringstream ss;
  ss << in.rdbuf();
  return state_from_string(ss.str(), model);
}

StateVector state_from_string(const std::string& text, const ModelPtr& model) {
  try {
    const json j = json::parse(text);
    if (j.at("model").get<std::string>() != model->name())
      throw ParseError("state belongs to model " + j.at("model").get<std::string>() + ", not " + model->name());
    std::optional<int> paired;
    if (j.contains("paired_site") && !j.at("paired_site").is_null()) paired = j.at("paired_site").get<int>();
    auto basis = Basis::make(model, labels_to_charges(*model, j.at("leaves")),
                             model->charge(j.at("total").get<std::string>()), paired);
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
    for (const auto& row : j.at("rows")) {
      const auto idx = basis->find(labels_to_charges(*model, row.at("internals")));
      if (!idx) throw ParseError("state row names a tree outside the basis");
      amps(static_cast<Eigen::Index>(*idx)) = {row.at("re").get<double>(), row.at("im").get<double>()};
    }
    return StateVector(std::move(basis), std::move(amps));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed state: ") + e.what());
  } catch (const UnknownCharge& e) {
    throw ParseError(std::string("malformed state: ") + e.what());
  }
}

}  // namespace motqc
