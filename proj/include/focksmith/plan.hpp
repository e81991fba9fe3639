#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "focksmith/states.hpp"
#include "focksmith/types.hpp"

namespace focksmith {

// Circuit plans are small block-structured text files:
//
//   seed 7
//   space { modes 2 cutoff 12 }
//   input { mode 0 kind coherent alpha_re 0.5 }
//   stage { op beam_splitter tau 0.78539816339744828 mode_a 0 mode_b 1 }
//   measure { kind mean_photon mode 0 }
//
// Tokens are whitespace-separated; braces delimit blocks; `#` starts a
// comment running to the end of the line.  Parsing and validation report
// positions as line and column numbers.

class PlanError : public std::runtime_error {
 public:
  PlanError(const std::string& message, int line, int column)
      : std::runtime_error("plan error at line " + std::to_string(line) +
                           ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct SpaceDecl {
  int modes = 1;
  int cutoff = 10;

  bool operator==(const SpaceDecl&) const = default;
};

struct InputDecl {
  int mode = 0;
  StateSpec spec;
  int line = 0;
  int column = 0;

  bool operator==(const InputDecl& other) const {
    return mode == other.mode && spec == other.spec;
  }
};

// A named sub-block inside a stage: term, step, when, or detector.
struct SubBlock {
  std::string tag;
  std::map<std::string, double> nums;
  std::map<std::string, std::string> strs;
  int line = 0;
  int column = 0;

  bool operator==(const SubBlock& other) const {
    return tag == other.tag && nums == other.nums && strs == other.strs;
  }
};

struct Stage {
  std::string op;
  std::map<std::string, double> nums;
  std::map<std::string, std::string> strs;
  std::vector<SubBlock> subs;
  int line = 0;
  int column = 0;

  bool operator==(const Stage& other) const {
    return op == other.op && nums == other.nums && strs == other.strs &&
           subs == other.subs;
  }
};

struct Measurement {
  std::string kind;
  std::map<std::string, double> nums;
  std::map<std::string, std::string> strs;
  std::optional<StateSpec> target;  // fidelity_with only
  int line = 0;
  int column = 0;

  bool operator==(const Measurement& other) const {
    return kind == other.kind && nums == other.nums && strs == other.strs &&
           target == other.target;
  }
};

struct CircuitPlan {
  SpaceDecl space;
  std::uint64_t seed = 0;
  std::vector<InputDecl> inputs;
  std::vector<Stage> stages;
  std::vector<Measurement> measurements;

  bool operator==(const CircuitPlan&) const = default;
};

// Parses and fully validates a plan: grammar, op and parameter vocabulary,
// numeric ranges, and mode indices against the running mode count (heralds
// and conditioning change how many modes remain).  Throws PlanError.
CircuitPlan parse_plan(const std::string& text);

// Canonical text form; parse_plan(print_plan(p)) == p.
std::string print_plan(const CircuitPlan& plan);

// Number of modes that remain once every stage of the plan has run.
int final_mode_count(const CircuitPlan& plan);

}  // namespace focksmith
