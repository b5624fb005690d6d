// cli.cpp
#include "motqc/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "motqc/braid_compiler.hpp"
#include "motqc/trace.hpp"

namespace motqc {
namespace {

using nlohmann::json;

struct ModelOptions {
  std::string name = "fibonacci";
  std::optional<int> k;
  std::string file;
  std::string charge;
};

struct RunOptions {
  std::uint64_t seed = 0;
  long trials = 1;
  int max_attempts = kDefaultMaxAttempts;
  std::string routing = std::string(to_string(kDefaultRouting));
  std::string format = "json";
  bool human = false;
  std::string trace_path;
};

void add_model_options(CLI::App* app, ModelOptions& m) {
  app->add_option("--model", m.name, "built-in model: fibonacci, ising, su2_k (or su2_<k>)")->capture_default_str();
  app->add_option("--k", m.k, "level for su2_k");
  app->add_option("--model-file", m.file, "model file; overrides --model");
  app->add_option("--charge", m.charge, "computational charge label (default: first non-vacuum charge)");
}

void add_output_options(CLI::App* app, RunOptions& r) {
  app->add_option("--format", r.format, "machine output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app->add_flag("--human", r.human, "print a human-readable table instead");
}

void add_run_options(CLI::App* app, RunOptions& r, long default_trials) {
  r.trials = default_trials;
  app->add_option("--seed", r.seed, "master seed (required)")->required();
  app->add_option("--trials", r.trials, "number of trials")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--max-attempts", r.max_attempts, "forced-measurement attempt limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--routing", r.routing, "routing of non-adjacent pair measurements")
      ->check(CLI::IsMember({"over", "under"}))
      ->capture_default_str();
  app->add_option("--trace", r.trace_path, "write the measurement log to this file");
  add_output_options(app, r);
}

ModelPtr load_model(const ModelOptions& m, double tolerance) {
  if (!m.file.empty()) return load_model_file(m.file, tolerance);
  static const std::regex su2_re("su2_([0-9]+)");
  std::smatch match;
  if (std::regex_match(m.name, match, su2_re)) return load_builtin("su2_k", std::stoi(match[1].str()));
  return load_builtin(m.name, m.k);
}

Charge pick_charge(const AnyonModel& model, const std::string& label) {
  if (!label.empty()) return model.charge(label);
  if (model.rank() < 2) throw InvalidArgument("model has no non-vacuum charge");
  return Charge{1};
}

std::string g17(double x) { return format_real(x); }

// The total charge with the largest fusion space (lowest index on ties).
Charge roomiest_total(const ModelPtr& m, const std::vector<Charge>& leaves) {
  Charge best = kVacuum;
  std::size_t size = 0;
  for (Charge c : m->charges()) {
    const auto s = Basis::make(m, leaves, c)->size();
    if (s > size) {
      size = s;
      best = c;
    }
  }
  if (size == 0) throw InvalidArgument("leaves admit no total charge");
  return best;
}

class TraceSink {
 public:
  TraceSink(const std::string& path, const AnyonModel& model) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw InvalidArgument("cannot open trace file " + path);
    writer_ = std::make_unique<TraceWriter>(*file_, model);
  }
  TraceWriter* get() { return writer_.get(); }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::unique_ptr<TraceWriter> writer_;
};

// ---------------------------------------------------------------- verify

int cmd_verify(const ModelOptions& mo, double tolerance, const RunOptions& ro, std::ostream& out) {
  const auto model = load_model(mo, tolerance);
  const auto rep = verify_consistency(*model, tolerance);
  if (ro.human) {
    out << "model       " << model->name() << "\n"
        << "pentagon    " << rep.max_pentagon_residual << "\n"
        << "hexagon     " << rep.max_hexagon_residual << "\n"
        << "unitarity   " << rep.max_unitarity_residual << "\n"
        << "qdim        " << rep.qdim_residual << "\n"
        << "pair prob   " << rep.pair_probability_residual << "\n"
        << "tolerance   " << rep.tolerance << "\n"
        << "result      " << (rep.pass ? "PASS" : "FAIL") << "\n";
  } else if (ro.format == "csv") {
    out << "metric,value\n"
        << "model," << model->name() << "\n"
        << "pentagon," << g17(rep.max_pentagon_residual) << "\n"
        << "hexagon," << g17(rep.max_hexagon_residual) << "\n"
        << "unitarity," << g17(rep.max_unitarity_residual) << "\n"
        << "qdim," << g17(rep.qdim_residual) << "\n"
        << "pair_probability," << g17(rep.pair_probability_residual) << "\n"
        << "tolerance," << g17(rep.tolerance) << "\n"
        << "pass," << (rep.pass ? "true" : "false") << "\n";
  } else {
    json j{{"command", "verify"},
           {"model", model->name()},
           {"pentagon", rep.max_pentagon_residual},
           {"hexagon", rep.max_hexagon_residual},
           {"unitarity", rep.max_unitarity_residual},
           {"qdim", rep.qdim_residual},
           {"pair_probability", rep.pair_probability_residual},
           {"tolerance", rep.tolerance},
           {"pass", rep.pass}};
    out << j.dump(2) << "\n";
  }
  return rep.pass ? kExitPass : kExitCheckFailed;
}

// --------------------------------------------------------- teleport-stats

struct TrialResult {
  bool failed = false;
  MeasurementRecord record;
};

int cmd_teleport_stats(const ModelOptions& mo, double tolerance, const RunOptions& ro, std::ostream& out) {
  const auto model = load_model(mo, tolerance);
  const Charge a = pick_charge(*model, mo.charge);
  const Routing routing = parse_routing(ro.routing);
  const std::vector<Charge> encoded_leaves(3, a);
  const Charge total = roomiest_total(model, encoded_leaves);
  TraceSink trace(ro.trace_path, *model);

  // Leaves (a, abar | a a a): the pair on (0, 1) is the recovery pair, the
  // target pair is (1, 2).
  std::vector<TrialResult> trials(static_cast<std::size_t>(ro.trials));
  for (long t = 0; t < ro.trials; ++t) {
    Rng rng = Rng::substream(ro.seed, static_cast<std::uint64_t>(t));
    const auto input = attach_pair(random_state(model, encoded_leaves, total, rng), 0, a);
    if (trace.get()) trace.get()->trial(t);
    try {
      auto res = forced_measurement(input, {1, 2}, {0, 1}, rng, ro.max_attempts, routing);
      if (trace.get()) trace.get()->forced(res.record);
      trials[static_cast<std::size_t>(t)].record = std::move(res.record);
    } catch (const MaxAttemptsExceeded&) {
      trials[static_cast<std::size_t>(t)].failed = true;
    }
  }

  // Statistics.
  const double d2 = expected_attempt_bound(*model, a);
  std::map<Charge, std::pair<long, long>> by_e;  // e -> (attempts, successes)
  for (Charge e : model->products(a, model->dual(a))) by_e[e] = {0, 0};
  long ok = 0, failures = 0;
  double sum = 0.0, sum2 = 0.0;
  for (const auto& tr : trials) {
    if (tr.failed) {
      ++failures;
      continue;
    }
    ++ok;
    const auto& o = tr.record.outcomes;
    for (std::size_t j = 0; j + 1 < o.size(); j += 2) {
      auto& slot = by_e[o[j]];
      ++slot.first;
      slot.second += o[j + 1] == kVacuum;
    }
    sum += tr.record.attempts;
    sum2 += static_cast<double>(tr.record.attempts) * tr.record.attempts;
  }
  bool pass = ok > 0;
  json e_rows = json::array();
  for (const auto& [e, cnt] : by_e) {
    const double p = success_probability(*model, a, e);
    const double phat = cnt.first ? static_cast<double>(cnt.second) / cnt.first : 0.0;
    const double sigma = cnt.first ? std::sqrt(p * (1 - p) / cnt.first) : 0.0;
    const double z = sigma > 0 ? (phat - p) / sigma : 0.0;
    if (cnt.first && std::abs(z) > 3.0) pass = false;
    e_rows.push_back({{"e", model->label(e)},
                      {"attempts", cnt.first},
                      {"successes", cnt.second},
                      {"p_hat", phat},
                      {"expected", p},
                      {"sigma", sigma},
                      {"z", z}});
  }
  const double mean = ok ? sum / ok : 0.0;
  const double var = ok > 1 ? (sum2 - ok * mean * mean) / (ok - 1) : 0.0;
  const double mean_sigma = ok ? std::sqrt(std::max(var, 0.0) / ok) : 0.0;
  const double markov = expected_attempts(*model, a);
  const double z_markov = mean_sigma > 0 ? (mean - markov) / mean_sigma : 0.0;
  if (mean > d2 + 3 * mean_sigma || std::abs(z_markov) > 3.0) pass = false;
  json tails = json::array();
  for (int n : {5, 10, 20}) {
    long above = 0;
    for (const auto& tr : trials) above += tr.failed || tr.record.attempts > n;
    const double emp = static_cast<double>(above) / ro.trials;
    const double bound = failure_tail_probability(*model, a, n);
    const double sigma = std::sqrt(bound * (1 - bound) / ro.trials);
    if (emp > bound + 3 * sigma) pass = false;
    tails.push_back({{"n", n}, {"empirical", emp}, {"bound", bound}, {"sigma", sigma}});
  }

  if (ro.human) {
    out << "model " << model->name() << ", charge " << model->label(a) << ", " << ro.trials << " trials, seed "
        << ro.seed << "\n";
    out << std::left << std::setw(8) << "e" << std::setw(10) << "attempts" << std::setw(12) << "p_hat"
        << std::setw(12) << "d_e/d_a^2" << "z\n";
    for (const auto& r : e_rows)
      out << std::setw(8) << r["e"].get<std::string>() << std::setw(10) << r["attempts"].get<long>() << std::setw(12)
          << r["p_hat"].get<double>() << std::setw(12) << r["expected"].get<double>() << r["z"].get<double>() << "\n";
    out << "mean attempts " << mean << " +- " << mean_sigma << " (Markov " << markov << ", bound d_a^2 = " << d2
        << ")\n";
    for (const auto& t : tails)
      out << "Prob(attempts > " << t["n"].get<int>() << ") = " << t["empirical"].get<double>() << " (bound "
          << t["bound"].get<double>() << ")\n";
    out << "failures " << failures << "\nresult " << (pass ? "PASS" : "FAIL") << "\n";
  } else if (ro.format == "csv") {
    out << "trial,attempts,outcomes,trajectory_probability,phase_re,phase_im\n";
    for (std::size_t t = 0; t < trials.size(); ++t) {
      const auto& tr = trials[t];
      if (tr.failed) {
        out << t << ",failed,,,,\n";
        continue;
      }
      out << t << "," << tr.record.attempts << ",";
      for (std::size_t i = 0; i < tr.record.outcomes.size(); ++i)
        out << (i ? " " : "") << model->label(tr.record.outcomes[i]);
      out << "," << g17(tr.record.trajectory_probability) << "," << g17(tr.record.phase.real()) << ","
          << g17(tr.record.phase.imag()) << "\n";
    }
    out << "\nstatistic,key,value,expected,sigma,z\n";
    for (const auto& r : e_rows)
      out << "success," << r["e"].get<std::string>() << "," << g17(r["p_hat"].get<double>()) << ","
          << g17(r["expected"].get<double>()) << "," << g17(r["sigma"].get<double>()) << ","
          << g17(r["z"].get<double>()) << "\n";
    out << "mean_attempts,," << g17(mean) << "," << g17(markov) << "," << g17(mean_sigma) << "," << g17(z_markov)
        << "\n";
    out << "attempt_bound,," << g17(mean) << "," << g17(d2) << "," << g17(mean_sigma) << ",\n";
    for (const auto& t : tails)
      out << "tail," << t["n"].get<int>() << "," << g17(t["empirical"].get<double>()) << ","
          << g17(t["bound"].get<double>()) << "," << g17(t["sigma"].get<double>()) << ",\n";
    out << "failures,," << failures << ",,,\n";
    out << "pass,," << (pass ? "true" : "false") << ",,,\n";
  } else {
    json per_trial = json::array();
    for (std::size_t t = 0; t < trials.size(); ++t) {
      const auto& tr = trials[t];
      if (tr.failed) {
        per_trial.push_back({{"trial", t}, {"failed", true}});
        continue;
      }
      json outcomes = json::array();
      for (Charge c : tr.record.outcomes) outcomes.push_back(model->label(c));
      per_trial.push_back({{"trial", t},
                           {"attempts", tr.record.attempts},
                           {"outcomes", outcomes},
                           {"trajectory_probability", tr.record.trajectory_probability},
                           {"phase", {tr.record.phase.real(), tr.record.phase.imag()}}});
    }
    json j{{"command", "teleport-stats"},
           {"model", model->name()},
           {"charge", model->label(a)},
           {"seed", ro.seed},
           {"trials", ro.trials},
           {"routing", ro.routing},
           {"max_attempts", ro.max_attempts},
           {"per_trial", per_trial},
           {"success_by_e", e_rows},
           {"mean_attempts", mean},
           {"mean_sigma", mean_sigma},
           {"markov_mean", markov},
           {"z_markov", z_markov},
           {"attempt_bound", d2},
           {"tail", tails},
           {"failures", failures},
           {"pass", pass}};
    out << j.dump(2) << "\n";
  }
  return pass ? kExitPass : kExitCheckFailed;
}

// ------------------------------------------------------------ braid-check

struct BraidOptions {
  std::string word;
  std::string compare;
  int n = 0;
  bool economy = false;
  std::string init = "random";
  std::string readouts;
  std::string output;
  std::string schedule;
};

int needed_anyons(const BraidWord& w) {
  int n = 2;
  for (const auto& g : w.generators) n = std::max(n, g.index + 1);
  return n;
}

StateVector initial_state(const ArrayLayout& layout, const std::string& init, Rng& rng) {
  if (init == "array") return build_array(layout.model, layout.a, layout.num_computational(),
                                          layout.self_dual_economy, layout.routing).state;
  const std::vector<Charge> comp(static_cast<std::size_t>(layout.num_computational()), layout.a);
  return embed_computational(layout, random_state(layout.model, comp, roomiest_total(layout.model, comp), rng));
}

json phase_json(Complex z) { return json::array({z.real(), z.imag()}); }

struct WordRun {
  Execution exec;
  double fidelity = 0.0;
};

WordRun run_word(const BraidWord& w, const ArrayLayout& layout, const StateVector& init, Rng& rng, int max_attempts,
                 TraceWriter* trace) {
  auto exec = execute(compile(w, layout), layout, init, rng, max_attempts, trace);
  const double fid = fidelity(direct_braid_reference(w, layout, init), exec.state);
  return {std::move(exec), fid};
}

json braids_json(const std::vector<BraidRecord>& braids) {
  json arr = json::array();
  for (const auto& b : braids) {
    json steps = json::array();
    for (const auto& s : b.steps) steps.push_back({{"attempts", s.attempts}, {"phase", phase_json(s.phase)}});
    arr.push_back({{"direction", std::string(to_string(b.direction))},
                   {"phase", phase_json(b.extracted_phase)},
                   {"curl", phase_json(b.isotopy.factor)},
                   {"steps", steps}});
  }
  return arr;
}

int cmd_braid_check(const ModelOptions& mo, double tolerance, const RunOptions& ro, const BraidOptions& bo,
                    std::ostream& out) {
  const auto model = load_model(mo, kDefaultConsistencyTolerance);
  const Charge a = pick_charge(*model, mo.charge);
  const Routing routing = parse_routing(ro.routing);
  const BraidWord word = parse_braid_word(bo.word);
  std::optional<BraidWord> other;
  if (!bo.compare.empty()) other = parse_braid_word(bo.compare);
  int n = bo.n ? bo.n : std::max(needed_anyons(word), other ? needed_anyons(*other) : 2);
  const auto layout = make_layout(model, a, n, bo.economy, routing);
  check_word(word, layout);
  if (other) check_word(*other, layout);
  TraceSink trace(ro.trace_path, *model);

  bool pass = true;
  double min_fid = 1.0;
  json results = json::array();
  std::ostringstream human;
  for (long t = 0; t < ro.trials; ++t) {
    Rng rng = Rng::substream(ro.seed, static_cast<std::uint64_t>(t));
    const StateVector init = initial_state(layout, bo.init, rng);
    if (trace.get()) trace.get()->trial(t);
    json r{{"trial", t}};
    try {
      auto w1 = run_word(word, layout, init, rng, ro.max_attempts, trace.get());
      r["fidelity"] = w1.fidelity;
      r["braids"] = braids_json(w1.exec.braids);
      r["resources_restored"] = true;
      min_fid = std::min(min_fid, w1.fidelity);
      if (w1.fidelity < 1.0 - tolerance) pass = false;
      human << "trial " << t << ": fidelity " << std::fixed << std::setprecision(12) << w1.fidelity;
      if (other) {
        auto w2 = run_word(*other, layout, init, rng, ro.max_attempts, trace.get());
        const double cross = fidelity(w1.exec.state, w2.exec.state);
        r["compare_fidelity"] = w2.fidelity;
        r["compare_braids"] = braids_json(w2.exec.braids);
        r["cross_fidelity"] = cross;
        min_fid = std::min({min_fid, w2.fidelity, cross});
        if (w2.fidelity < 1.0 - tolerance || cross < 1.0 - tolerance) pass = false;
        human << ", compare " << w2.fidelity << ", cross " << cross;
      }
      human.unsetf(std::ios::floatfield);
      human << std::setprecision(6) << "\n";
    } catch (const MaxAttemptsExceeded& e) {
      r["error"] = e.what();
      pass = false;
      human << "trial " << t << ": " << e.what() << "\n";
    } catch (const PreconditionViolation& e) {
      r["error"] = e.what();
      r["resources_restored"] = false;
      pass = false;
      human << "trial " << t << ": " << e.what() << "\n";
    }
    results.push_back(std::move(r));
  }

  if (ro.human) {
    out << "model " << model->name() << ", charge " << model->label(a) << ", word \"" << to_string(word) << "\"";
    if (other) out << " vs \"" << to_string(*other) << "\"";
    out << ", " << n << " computational anyons" << (bo.economy ? " (economy)" : "") << "\n"
        << human.str() << "min fidelity " << std::setprecision(12) << min_fid << "\nresult "
        << (pass ? "PASS" : "FAIL") << "\n";
  } else if (ro.format == "csv") {
    out << "trial,fidelity,compare_fidelity,cross_fidelity,phases\n";
    for (const auto& r : results) {
      out << r["trial"].get<long>() << ",";
      if (r.contains("error")) {
        out << "error,,,\n";
        continue;
      }
      out << g17(r["fidelity"].get<double>()) << ",";
      if (r.contains("compare_fidelity"))
        out << g17(r["compare_fidelity"].get<double>()) << "," << g17(r["cross_fidelity"].get<double>());
      else
        out << ",";
      out << ",";
      bool first = true;
      for (const auto& b : r["braids"]) {
        out << (first ? "" : " ") << g17(b["phase"][0].get<double>()) << ":" << g17(b["phase"][1].get<double>());
        first = false;
      }
      out << "\n";
    }
    out << "\nmin_fidelity," << g17(min_fid) << "\npass," << (pass ? "true" : "false") << "\n";
  } else {
    json j{{"command", "braid-check"},
           {"model", model->name()},
           {"charge", model->label(a)},
           {"word", to_string(word)},
           {"computational", n},
           {"economy", bo.economy},
           {"routing", ro.routing},
           {"seed", ro.seed},
           {"trials", ro.trials},
           {"tolerance", tolerance},
           {"results", results},
           {"min_fidelity", min_fid},
           {"pass", pass}};
    if (other) j["compare"] = to_string(*other);
    out << j.dump(2) << "\n";
  }
  return pass ? kExitPass : kExitCheckFailed;
}

// ---------------------------------------------------------- compile / run

std::vector<std::pair<int, int>> parse_readouts(const std::string& text) {
  std::vector<std::pair<int, int>> out;
  std::istringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (tok.empty()) continue;
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw ParseError("readout pair '" + tok + "' must look like i:j");
    try {
      out.emplace_back(std::stoi(tok.substr(0, colon)) - 1, std::stoi(tok.substr(colon + 1)) - 1);
    } catch (const std::exception&) {
      throw ParseError("readout pair '" + tok + "' must look like i:j");
    }
  }
  return out;
}

int cmd_compile(const ModelOptions& mo, const RunOptions& ro, const BraidOptions& bo, std::ostream& out) {
  const auto model = load_model(mo, kDefaultConsistencyTolerance);
  const Charge a = pick_charge(*model, mo.charge);
  const BraidWord word = parse_braid_word(bo.word);
  const int n = bo.n ? bo.n : needed_anyons(word);
  const auto layout = make_layout(model, a, n, bo.economy, parse_routing(ro.routing));
  const auto schedule = compile(word, layout, parse_readouts(bo.readouts));
  if (bo.output.empty()) {
    write_schedule(out, schedule, layout);
  } else {
    std::ofstream f(bo.output);
    if (!f) throw InvalidArgument("cannot write " + bo.output);
    write_schedule(f, schedule, layout);
  }
  return kExitPass;
}

int cmd_run(ModelOptions mo, double tolerance, const RunOptions& ro, const BraidOptions& bo, std::ostream& out) {
  std::ifstream in(bo.schedule);
  if (!in) throw ParseError("cannot open schedule file " + bo.schedule);
  const auto file = read_schedule(in);
  ModelPtr model;
  if (mo.file.empty()) {
    mo.name = file.model;
    model = load_model(mo, kDefaultConsistencyTolerance);
  } else {
    model = load_model(mo, kDefaultConsistencyTolerance);
    if (model->name() != file.model)
      throw ParseError("schedule was compiled for model " + file.model + ", not " + model->name());
  }
  const Charge a = model->charge(file.charge);
  const auto layout = make_layout(model, a, file.n_computational, file.self_dual_economy, file.routing);
  check_schedule(file.schedule, layout);
  TraceSink trace(ro.trace_path, *model);

  bool pass = true;
  double min_fid = 1.0;
  json results = json::array();
  for (long t = 0; t < ro.trials; ++t) {
    Rng rng = Rng::substream(ro.seed, static_cast<std::uint64_t>(t));
    const StateVector init = initial_state(layout, bo.init, rng);
    if (trace.get()) trace.get()->trial(t);
    json r{{"trial", t}};
    try {
      auto exec = execute(file.schedule, layout, init, rng, ro.max_attempts, trace.get());
      // Readouts change the state, so the oracle check covers the braid part only.
      const auto oracle = direct_braid_reference(file.schedule.word, layout, init);
      double fid = 1.0;
      if (exec.readouts.empty()) {
        fid = fidelity(oracle, exec.state);
      } else {
        Rng replay = Rng::substream(ro.seed, static_cast<std::uint64_t>(t));
        (void)initial_state(layout, bo.init, replay);
        Schedule braid_only{file.schedule.word, {}};
        for (const auto& s : file.schedule.steps)
          if (std::holds_alternative<ForcedStep>(s)) braid_only.steps.push_back(s);
        fid = fidelity(oracle, execute(braid_only, layout, init, replay, ro.max_attempts).state);
      }
      min_fid = std::min(min_fid, fid);
      if (fid < 1.0 - tolerance) pass = false;
      json reads = json::array();
      for (const auto& m : exec.readouts)
        reads.push_back({{"pair", {m.pair.first, m.pair.second}},
                         {"charge", model->label(m.charge)},
                         {"probability", m.probability}});
      r["fidelity"] = fid;
      r["braids"] = braids_json(exec.braids);
      r["readouts"] = reads;
    } catch (const MaxAttemptsExceeded& e) {
      r["error"] = e.what();
      pass = false;
    } catch (const PreconditionViolation& e) {
      r["error"] = e.what();
      pass = false;
    }
    results.push_back(std::move(r));
  }

  if (ro.human) {
    out << "schedule " << bo.schedule << ": word \"" << to_string(file.schedule.word) << "\", "
        << file.schedule.forced_count() << " forced measurements\n";
    for (const auto& r : results) {
      out << "trial " << r["trial"].get<long>() << ": ";
      if (r.contains("error")) {
        out << r["error"].get<std::string>() << "\n";
        continue;
      }
      out << "fidelity " << std::setprecision(12) << r["fidelity"].get<double>();
      for (const auto& m : r["readouts"]) out << ", readout " << m["charge"].get<std::string>();
      out << "\n";
    }
    out << "result " << (pass ? "PASS" : "FAIL") << "\n";
  } else if (ro.format == "csv") {
    out << "trial,fidelity,readouts\n";
    for (const auto& r : results) {
      out << r["trial"].get<long>() << ",";
      if (r.contains("error")) {
        out << "error,\n";
        continue;
      }
      out << g17(r["fidelity"].get<double>()) << ",";
      bool first = true;
      for (const auto& m : r["readouts"]) {
        out << (first ? "" : " ") << m["charge"].get<std::string>();
        first = false;
      }
      out << "\n";
    }
    out << "\nmin_fidelity," << g17(min_fid) << "\npass," << (pass ? "true" : "false") << "\n";
  } else {
    json j{{"command", "run"},
           {"model", model->name()},
           {"word", to_string(file.schedule.word)},
           {"seed", ro.seed},
           {"trials", ro.trials},
           {"results", results},
           {"min_fidelity", min_fid},
           {"pass", pass}};
    out << j.dump(2) << "\n";
  }
  return pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measurement-only topological quantum computation simulator"};
  app.require_subcommand(1);
  ModelOptions mo;
  RunOptions ro;
  BraidOptions bo;
  double tolerance = kDefaultConsistencyTolerance;
  double fid_tolerance = 1e-9;

  auto* verify = app.add_subcommand("verify", "check pentagon, hexagon, unitarity and dimension identities");
  add_model_options(verify, mo);
  verify->add_option("--tolerance", tolerance, "residual tolerance")->capture_default_str();
  add_output_options(verify, ro);

  auto* stats = app.add_subcommand("teleport-stats", "Monte Carlo statistics of forced-measurement teleportation");
  add_model_options(stats, mo);
  stats->add_option("--tolerance", tolerance, "model-file consistency tolerance")->capture_default_str();
  add_run_options(stats, ro, 1000);

  auto* check = app.add_subcommand("braid-check", "compare measurement-generated braids with direct braiding");
  add_model_options(check, mo);
  add_run_options(check, ro, 1);
  check->add_option("--word", bo.word, "braid word, e.g. \"s1 s2' s1\"")->required();
  check->add_option("--compare", bo.compare, "second word; both must give the same state up to phase");
  check->add_option("--n", bo.n, "number of computational anyons (default: smallest that fits)");
  check->add_flag("--economy", bo.economy, "one resource anyon per gap (self-dual charges)");
  check->add_option("--init", bo.init, "initial computational state")
      ->check(CLI::IsMember({"random", "array"}))
      ->capture_default_str();
  check->add_option("--tolerance", fid_tolerance, "fidelity tolerance")->capture_default_str();

  auto* comp = app.add_subcommand("compile", "emit the measurement schedule of a braid word");
  add_model_options(comp, mo);
  comp->add_option("--word", bo.word, "braid word")->required();
  comp->add_option("--n", bo.n, "number of computational anyons");
  comp->add_flag("--economy", bo.economy, "one resource anyon per gap (self-dual charges)");
  comp->add_option("--routing", ro.routing, "routing convention")
      ->check(CLI::IsMember({"over", "under"}))
      ->capture_default_str();
  comp->add_option("--readout", bo.readouts, "computational pairs to read out after the braid, e.g. 1:2,3:4");
  comp->add_option("--output", bo.output, "write the schedule here instead of stdout");

  auto* run = app.add_subcommand("run", "execute a schedule file");
  add_model_options(run, mo);
  add_run_options(run, ro, 1);
  run->add_option("--schedule", bo.schedule, "schedule file from `compile`")->required();
  run->add_option("--init", bo.init, "initial computational state")
      ->check(CLI::IsMember({"random", "array"}))
      ->capture_default_str();
  run->add_option("--tolerance", fid_tolerance, "fidelity tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(mo, tolerance, ro, out);
    if (stats->parsed()) return cmd_teleport_stats(mo, tolerance, ro, out);
    if (check->parsed()) return cmd_braid_check(mo, fid_tolerance, ro, bo, out);
    if (comp->parsed()) return cmd_compile(mo, ro, bo, out);
    if (run->parsed()) return cmd_run(mo, fid_tolerance, ro, bo, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownCharge& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitCheckFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace motqc
