// braid_compiler.hpp
//
// Braid words on a line of stationary computational anyons, compiled into
// forced-measurement schedules.
//
// Standard layout: c0 r r' c1 r r' c2 ... (one resource pair between each
// pair of neighbours, 3n-2 leaves). Economy layout (self-dual a only):
// c0 x0 c1 x1 c2 ... with one resource anyon per gap; x_{2k} and x_{2k+1}
// form a pair straddling c_{2k+1}, and a trailing x closes an odd count.
#ifndef MOTQC_BRAID_COMPILER_HPP
#define MOTQC_BRAID_COMPILER_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "motqc/teleport.hpp"

namespace motqc {

class TraceWriter;

struct ArrayLayout {
  ModelPtr model;
  Charge a;
  int num_leaves = 0;
  /// Leaf index of computational anyon i.
  std::vector<int> computational;
  /// Resource pairs, each in a definite vacuum channel under `routing`.
  std::vector<LeafPair> resources;
  /// Role leaves (1, 2, 3, 4) of the forced measurements for generator i.
  std::vector<Quad> quads;
  bool self_dual_economy = false;
  Routing routing = kDefaultRouting;

  std::vector<Charge> leaves() const;
  int num_computational() const { return static_cast<int>(computational.size()); }
};

ArrayLayout make_layout(ModelPtr model, Charge a, int n_computational, bool self_dual_economy = false,
                        Routing routing = kDefaultRouting);

/// sigma_index^{+1} or its inverse; index is 1-based and acts on computational
/// anyons index-1 and index.
struct Generator {
  int index = 1;
  bool inverse = false;
  friend bool operator==(const Generator&, const Generator&) = default;
};

struct BraidWord {
  std::vector<Generator> generators;
  friend bool operator==(const BraidWord&, const BraidWord&) = default;
};

/// "s1 s2' s1" (apostrophe marks the inverse). Throws ParseError.
BraidWord parse_braid_word(std::string_view text);
std::string to_string(const BraidWord& word);
BraidWord inverse(const BraidWord& word);
/// Throws InvalidArgument if a generator does not fit the layout.
void check_word(const BraidWord& word, const ArrayLayout& layout);

struct ArrayState {
  ArrayLayout layout;
  StateVector state;
};

/// Computational anyons created pairwise from the vacuum ((c0 c1), (c2 c3), ...;
/// an odd last one is left alone), resource pairs inserted between them.
/// Requires a self-dual a.
ArrayState build_array(ModelPtr model, Charge a, int n_computational, bool self_dual_economy = false,
                       Routing routing = kDefaultRouting);

/// Inserts the layout's resource anyons into a state of the computational
/// anyons alone (n leaves of charge a, any total).
StateVector embed_computational(const ArrayLayout& layout, const StateVector& computational);

struct ForcedStep {
  int generator = 0;  ///< position in the word
  int sub = 0;        ///< 0, 1, 2 within the generator
  Quad roles{};
  BraidDirection direction = BraidDirection::positive;
  LeafPair target;
  LeafPair recovery;
};

struct ReadoutStep {
  LeafPair pair;
};

using ScheduleStep = std::variant<ForcedStep, ReadoutStep>;

struct Schedule {
  BraidWord word;
  std::vector<ScheduleStep> steps;
  std::size_t forced_count() const;
};

/// Three forced measurements per generator on that generator's quad. Readouts
/// (computational index pairs) are appended after the braid.
Schedule compile(const BraidWord& word, const ArrayLayout& layout,
                 const std::vector<std::pair<int, int>>& readouts = {});

struct Execution {
  StateVector state;
  std::vector<BraidRecord> braids;
  std::vector<MeasurementOutcome> readouts;
};

/// Runs the schedule. After every generator the result is compared against
/// the direct exchange (extracted_phase) and every resource pair is checked to
/// be back in the vacuum channel (PreconditionViolation otherwise).
Execution execute(const Schedule& schedule, const ArrayLayout& layout, const StateVector& state, Rng& rng,
                  int max_attempts = kDefaultMaxAttempts, TraceWriter* trace = nullptr);

/// The exchange that generator g of the layout stands for, applied directly.
StateVector generator_reference(const ArrayLayout& layout, int index, bool inverse, const StateVector& state);
StateVector direct_braid_reference(const BraidWord& word, const ArrayLayout& layout, const StateVector& state);

Sample readout(const StateVector& state, LeafPair pair, Rng& rng, Routing routing = kDefaultRouting);

/// Readout pair of each 4-anyon qubit (c_{4q}, c_{4q+1}); documentation-level
/// preset, no gate set is implied.
std::vector<LeafPair> encoded_qubit_pairs(const ArrayLayout& layout);

/// Throws PreconditionViolation if any resource pair is not in the vacuum channel
/// within `tolerance`.
void check_resources(const ArrayLayout& layout, const StateVector& state, double tolerance = 1e-10);

// JSON schedule file.
void write_schedule(std::ostream& out, const Schedule& schedule, const ArrayLayout& layout);
struct ScheduleFile {
  std::string model;
  std::string charge;
  int n_computational = 0;
  bool self_dual_economy = false;
  Routing routing = kDefaultRouting;
  Schedule schedule;
};
/// Throws ParseError.
ScheduleFile read_schedule(std::istream& in);
/// Throws InvalidArgument when the steps do not match `layout`.
void check_schedule(const Schedule& schedule, const ArrayLayout& layout);

}  // namespace motqc

#endif  // MOTQC_BRAID_COMPILER_HPP
