// braid_compiler.cpp
#include "motqc/braid_compiler.hpp"

#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "motqc/trace.hpp"

namespace motqc {
namespace {

BraidDirection to_direction(bool inverse) { return inverse ? BraidDirection::inverse : BraidDirection::positive; }

// Tensor product with one more leaf of charge a on the right. The old total
// must be the vacuum so the new total is unique.
StateVector append_leaf(const StateVector& state, Charge a) {
  if (state.total() != kVacuum) throw InvalidArgument("append_leaf needs a vacuum-total state");
  if (state.num_leaves() == 0) {
    auto basis = Basis::make(state.basis().model_ptr(), {a}, a);
    return StateVector(basis, Vector::Ones(1));
  }
  auto leaves = state.leaves();
  leaves.push_back(a);
  auto basis = Basis::make(state.basis().model_ptr(), leaves, a);
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
  for (std::size_t i = 0; i < state.basis().size(); ++i) {
    auto internals = state.basis().internals(i);
    if (state.num_leaves() >= 2) internals.push_back(kVacuum);
    amps(static_cast<Eigen::Index>(*basis->find(internals))) = state.amplitudes()(static_cast<Eigen::Index>(i));
  }
  return StateVector(basis, amps);
}

}  // namespace

std::vector<Charge> ArrayLayout::leaves() const { return std::vector<Charge>(num_leaves, a); }

ArrayLayout make_layout(ModelPtr model, Charge a, int n, bool economy, Routing routing) {
  model->check(a);
  if (n < 2) throw InvalidArgument("an array needs at least 2 computational anyons");
  if (a == kVacuum) throw InvalidArgument("computational charge must not be the vacuum");
  if (model->dual(a) != a) throw InvalidArgument("arrays of charge " + model->label(a) + " need a self-dual charge");
  ArrayLayout L;
  L.model = std::move(model);
  L.a = a;
  L.self_dual_economy = economy;
  L.routing = routing;
  if (!economy) {
    L.num_leaves = 3 * n - 2;
    for (int i = 0; i < n; ++i) L.computational.push_back(3 * i);
    for (int i = 0; i + 1 < n; ++i) {
      L.resources.push_back({3 * i + 1, 3 * i + 2});
      L.quads.push_back({3 * i, 3 * i + 1, 3 * i + 2, 3 * i + 3});
    }
    return L;
  }
  const int gaps = n - 1;
  const int extra = gaps % 2;
  L.num_leaves = 2 * n - 1 + extra;
  for (int i = 0; i < n; ++i) L.computational.push_back(2 * i);
  for (int k = 0; 2 * k < gaps; ++k) L.resources.push_back({4 * k + 1, 4 * k + 3});
  for (int i = 0; i < gaps; ++i) {
    const int x = 2 * i + 1;
    const int partner = i % 2 == 0 ? x + 2 : x - 2;
    L.quads.push_back({2 * i + 2, x, partner, 2 * i});
  }
  return L;
}

BraidWord parse_braid_word(std::string_view text) {
  BraidWord w;
  std::istringstream ss{std::string(text)};
  for (std::string tok; ss >> tok;) {
    std::string body = tok;
    Generator g;
    if (!body.empty() && body.back() == '\'') {
      g.inverse = true;
      body.pop_back();
    }
    if (body.size() < 2 || (body[0] != 's' && body[0] != 'S'))
      throw ParseError("bad braid generator '" + tok + "' (expected s<i> or s<i>')");
    for (std::size_t i = 1; i < body.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(body[i]))) throw ParseError("bad braid generator '" + tok + "'");
    g.index = std::stoi(body.substr(1));
    if (g.index < 1) throw ParseError("braid generator index must be >= 1 in '" + tok + "'");
    w.generators.push_back(g);
  }
  return w;
}

std::string to_string(const BraidWord& word) {
  std::string s;
  for (const auto& g : word.generators) {
    if (!s.empty()) s += ' ';
    s += 's' + std::to_string(g.index) + (g.inverse ? "'" : "");
  }
  return s;
}

BraidWord inverse(const BraidWord& word) {
  BraidWord w;
  for (auto it = word.generators.rbegin(); it != word.generators.rend(); ++it)
    w.generators.push_back({it->index, !it->inverse});
  return w;
}

void check_word(const BraidWord& word, const ArrayLayout& layout) {
  for (const auto& g : word.generators)
    if (g.index < 1 || g.index >= layout.num_computational())
      throw InvalidArgument("generator s" + std::to_string(g.index) + " out of range for " +
                            std::to_string(layout.num_computational()) + " computational anyons");
}

StateVector embed_computational(const ArrayLayout& layout, const StateVector& comp) {
  const int n = layout.num_computational();
  if (comp.num_leaves() != n) throw InvalidArgument("computational state has the wrong number of leaves");
  for (Charge c : comp.leaves())
    if (c != layout.a) throw InvalidArgument("computational leaves must all carry the layout charge");
  const Charge abar = layout.model->dual(layout.a);
  StateVector s = comp;
  if (!layout.self_dual_economy) {
    for (int i = 0; i + 1 < n; ++i) s = attach_pair(s, 3 * i + 1, abar);
    return s;
  }
  // Insert each pair between c_{2k} and c_{2k+1}, then carry its right member
  // past c_{2k+1} along the routing side.
  const int back = -transport_sign(layout.routing);
  for (const auto& r : layout.resources) {
    s = attach_pair(s, r.first, abar);
    s = apply_braid(s, r.first + 1, back);
  }
  return s;
}

ArrayState build_array(ModelPtr model, Charge a, int n, bool economy, Routing routing) {
  auto layout = make_layout(model, a, n, economy, routing);
  StateVector comp = vacuum_state(model);
  for (int i = 0; i + 1 < n; i += 2) comp = attach_pair(comp, i, a);
  if (n % 2 == 1) comp = append_leaf(comp, a);
  auto state = embed_computational(layout, comp);
  return {std::move(layout), std::move(state)};
}

std::size_t Schedule::forced_count() const {
  std::size_t k = 0;
  for (const auto& s : steps) k += std::holds_alternative<ForcedStep>(s);
  return k;
}

Schedule compile(const BraidWord& word, const ArrayLayout& layout, const std::vector<std::pair<int, int>>& readouts) {
  check_word(word, layout);
  Schedule sched;
  sched.word = word;
  for (std::size_t g = 0; g < word.generators.size(); ++g) {
    const auto& gen = word.generators[g];
    const Quad& roles = layout.quads[gen.index - 1];
    const auto direction = realized_direction(to_direction(gen.inverse), layout.routing);
    const auto pairs = braid_measurement_pairs(roles, direction);
    for (int s = 0; s < 3; ++s)
      sched.steps.push_back(ForcedStep{static_cast<int>(g), s, roles, direction, pairs[s].first, pairs[s].second});
  }
  for (auto [i, j] : readouts) {
    if (i < 0 || j < 0 || i >= layout.num_computational() || j >= layout.num_computational() || i == j)
      throw InvalidArgument("readout pair out of range");
    int li = layout.computational[i], lj = layout.computational[j];
    if (li > lj) std::swap(li, lj);
    sched.steps.push_back(ReadoutStep{{li, lj}});
  }
  return sched;
}

void check_schedule(const Schedule& schedule, const ArrayLayout& layout) {
  check_word(schedule.word, layout);
  std::size_t forced = 0;
  for (const auto& step : schedule.steps) {
    if (const auto* r = std::get_if<ReadoutStep>(&step)) {
      if (r->pair.first < 0 || r->pair.second >= layout.num_leaves || r->pair.first >= r->pair.second)
        throw InvalidArgument("readout step names invalid leaves");
      continue;
    }
    const auto& f = std::get<ForcedStep>(step);
    const std::size_t g = forced / 3;
    const int sub = static_cast<int>(forced % 3);
    ++forced;
    if (g >= schedule.word.generators.size() || f.generator != static_cast<int>(g) || f.sub != sub)
      throw InvalidArgument("forced steps must come in groups of three, one group per generator");
    const auto& gen = schedule.word.generators[g];
    if (f.roles != layout.quads[gen.index - 1]) throw InvalidArgument("forced step quad does not match the layout");
    const auto pair = braid_measurement_pairs(f.roles, f.direction)[sub];
    if (!(f.target == pair.first) || !(f.recovery == pair.second))
      throw InvalidArgument("forced step pairs do not match its quad and direction");
    if (realized_direction(f.direction, layout.routing) != to_direction(gen.inverse))
      throw InvalidArgument("forced step direction does not realize its generator");
  }
  if (forced != 3 * schedule.word.generators.size())
    throw InvalidArgument("schedule has " + std::to_string(forced) + " forced steps for " +
                          std::to_string(schedule.word.generators.size()) + " generators");
}

StateVector generator_reference(const ArrayLayout& layout, int index, bool inv, const StateVector& state) {
  if (index < 1 || index >= layout.num_computational()) throw InvalidArgument("generator index out of range");
  const Quad& q = layout.quads[index - 1];
  if (!layout.self_dual_economy) return direct_exchange(state, q, to_direction(inv));
  // c_i x c_{i+1}: move x aside along the routing side, exchange, move it back.
  const int p = q[3];
  const int t = transport_sign(layout.routing);
  StateVector s = apply_braid(state, p, t);
  s = apply_braid(s, p + 1, inv ? -1 : 1);
  return apply_braid(s, p, -t);
}

StateVector direct_braid_reference(const BraidWord& word, const ArrayLayout& layout, const StateVector& state) {
  check_word(word, layout);
  StateVector s = state;
  for (const auto& g : word.generators) s = generator_reference(layout, g.index, g.inverse, s);
  return s;
}

Sample readout(const StateVector& state, LeafPair pair, Rng& rng, Routing routing) {
  return sample_measurement(state, pair.first, pair.second, rng, routing);
}

std::vector<LeafPair> encoded_qubit_pairs(const ArrayLayout& layout) {
  std::vector<LeafPair> out;
  for (int q = 0; 4 * q + 3 < layout.num_computational(); ++q)
    out.push_back({layout.computational[4 * q], layout.computational[4 * q + 1]});
  return out;
}

void check_resources(const ArrayLayout& layout, const StateVector& state, double tolerance) {
  for (const auto& r : layout.resources) {
    const double p0 = pair_charge_distribution(state, r.first, r.second, layout.routing).at(kVacuum);
    if (std::abs(p0 - 1.0) > tolerance)
      throw PreconditionViolation("resource pair (" + std::to_string(r.first) + ", " + std::to_string(r.second) +
                                  ") not in the vacuum channel: Prob(0) = " + std::to_string(p0));
  }
}

Execution execute(const Schedule& schedule, const ArrayLayout& layout, const StateVector& state, Rng& rng,
                  int max_attempts, TraceWriter* trace) {
  check_schedule(schedule, layout);
  if (state.num_leaves() != layout.num_leaves) throw InvalidArgument("state does not match the layout");
  Execution ex{state, {}, {}};
  StateVector group_input = state;
  BraidRecord current;
  for (const auto& step : schedule.steps) {
    if (const auto* r = std::get_if<ReadoutStep>(&step)) {
      auto sample = readout(ex.state, r->pair, rng, layout.routing);
      if (trace) trace->measurement(sample.outcome);
      ex.readouts.push_back(sample.outcome);
      ex.state = std::move(sample.state);
      continue;
    }
    const auto& f = std::get<ForcedStep>(step);
    if (f.sub == 0) {
      group_input = ex.state;
      current = BraidRecord{};
      current.direction = f.direction;
    }
    auto [next, rec] = forced_measurement(ex.state, f.target, f.recovery, rng, max_attempts, layout.routing);
    ex.state = std::move(next);
    current.steps[f.sub] = std::move(rec);
    if (f.sub == 2) {
      const auto& gen = schedule.word.generators[f.generator];
      finish_braid_record(current, generator_reference(layout, gen.index, gen.inverse, group_input), ex.state,
                          layout.a, to_direction(gen.inverse));
      check_resources(layout, ex.state);
      if (trace) trace->braid(current, f.generator, f.roles);
      ex.braids.push_back(std::move(current));
    }
  }
  return ex;
}

void write_schedule(std::ostream& out, const Schedule& schedule, const ArrayLayout& layout) {
  using nlohmann::json;
  json steps = json::array();
  for (const auto& step : schedule.steps) {
    if (const auto* r = std::get_if<ReadoutStep>(&step)) {
      steps.push_back({{"kind", "readout"}, {"pair", {r->pair.first, r->pair.second}}});
      continue;
    }
    const auto& f = std::get<ForcedStep>(step);
    steps.push_back({{"kind", "forced"},
                     {"generator", f.generator},
                     {"sub", f.sub},
                     {"quad", {f.roles[0], f.roles[1], f.roles[2], f.roles[3]}},
                     {"direction", std::string(to_string(f.direction))},
                     {"target", {f.target.first, f.target.second}},
                     {"recovery", {f.recovery.first, f.recovery.second}}});
  }
  json j{{"model", layout.model->name()},
         {"charge", layout.model->label(layout.a)},
         {"computational", layout.num_computational()},
         {"economy", layout.self_dual_economy},
         {"routing", std::string(to_string(layout.routing))},
         {"word", to_string(schedule.word)},
         {"steps", std::move(steps)}};
  out << j.dump(2) << "\n";
}

ScheduleFile read_schedule(std::istream& in) {
  using nlohmann::json;
  try {
    const json j = json::parse(in);
    ScheduleFile f;
    f.model = j.at("model").get<std::string>();
    f.charge = j.at("charge").get<std::string>();
    f.n_computational = j.at("computational").get<int>();
    f.self_dual_economy = j.value("economy", false);
    f.routing = parse_routing(j.value("routing", std::string(to_string(kDefaultRouting))));
    f.schedule.word = parse_braid_word(j.at("word").get<std::string>());
    auto pair = [](const json& p) { return LeafPair{p.at(0).get<int>(), p.at(1).get<int>()}; };
    for (const auto& s : j.at("steps")) {
      const auto kind = s.at("kind").get<std::string>();
      if (kind == "readout") {
        f.schedule.steps.push_back(ReadoutStep{pair(s.at("pair"))});
      } else if (kind == "forced") {
        ForcedStep st;
        st.generator = s.at("generator").get<int>();
        st.sub = s.at("sub").get<int>();
        const auto& q = s.at("quad");
        if (q.size() != 4) throw ParseError("schedule quad must have 4 leaves");
        for (int k = 0; k < 4; ++k) st.roles[k] = q.at(k).get<int>();
        const auto dir = s.at("direction").get<std::string>();
        if (dir != "positive" && dir != "inverse") throw ParseError("unknown braid direction '" + dir + "'");
        st.direction = dir == "positive" ? BraidDirection::positive : BraidDirection::inverse;
        st.target = pair(s.at("target"));
        st.recovery = pair(s.at("recovery"));
        f.schedule.steps.push_back(st);
      } else {
        throw ParseError("unknown schedule step kind '" + kind + "'");
      }
    }
    return f;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed schedule: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("malformed schedule: ") + e.what());
  }
}

}  // namespace motqc
