#include "focksmith/plan.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <set>
#include <sstream>
#include <vector>

#include "focksmith/io.hpp"

namespace focksmith {

namespace {

// ---------------------------------------------------------------------------
// Tokenizer

struct Token {
  std::string text;
  int line = 0;
  int column = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++column;
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') {
        ++i;
      }
      continue;
    }
    if (c == '{' || c == '}') {
      tokens.push_back({std::string(1, c), line, column});
      ++column;
      ++i;
      continue;
    }
    const int start_column = column;
    const std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
           text[i] != '{' && text[i] != '}' && text[i] != '#') {
      ++i;
      ++column;
    }
    tokens.push_back({text.substr(start, i - start), line, start_column});
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Block tree

struct Node;

struct NodeEntry {
  std::string key;
  int line = 0;
  int column = 0;
  bool is_block = false;
  std::string value;
  std::unique_ptr<Node> block;
};

struct Node {
  std::vector<NodeEntry> entries;
  int line = 1;
  int column = 1;
};

Node parse_entries(const std::vector<Token>& tokens, std::size_t& pos, bool top_level,
                   int open_line, int open_column) {
  Node node;
  node.line = open_line;
  node.column = open_column;
  while (true) {
    if (pos >= tokens.size()) {
      if (top_level) {
        return node;
      }
      throw PlanError("unclosed '{'", open_line, open_column);
    }
    const Token& key = tokens[pos];
    if (key.text == "}") {
      if (top_level) {
        throw PlanError("unexpected '}'", key.line, key.column);
      }
      ++pos;
      return node;
    }
    if (key.text == "{") {
      throw PlanError("expected a name, found '{'", key.line, key.column);
    }
    ++pos;
    if (pos >= tokens.size()) {
      throw PlanError("missing value for '" + key.text + "'", key.line, key.column);
    }
    const Token& value = tokens[pos];
    NodeEntry entry;
    entry.key = key.text;
    entry.line = key.line;
    entry.column = key.column;
    if (value.text == "{") {
      ++pos;
      entry.is_block = true;
      entry.block = std::make_unique<Node>(
          parse_entries(tokens, pos, false, value.line, value.column));
    } else if (value.text == "}") {
      throw PlanError("missing value for '" + key.text + "'", key.line, key.column);
    } else {
      entry.value = value.text;
      ++pos;
    }
    node.entries.push_back(std::move(entry));
  }
}

// ---------------------------------------------------------------------------
// Typed reads over a node

constexpr double kInf = std::numeric_limits<double>::infinity();

class Reader {
 public:
  Reader(const Node& node, std::string context)
      : node_(node), context_(std::move(context)), used_(node.entries.size(), false) {}

  PlanError error(const std::string& message) const {
    return PlanError(context_ + ": " + message, node_.line, node_.column);
  }

  PlanError error_at(const NodeEntry& entry, const std::string& message) const {
    return PlanError(context_ + ": " + message, entry.line, entry.column);
  }

  bool has(const std::string& name) const {
    for (const NodeEntry& entry : node_.entries) {
      if (entry.key == name) {
        return true;
      }
    }
    return false;
  }

  const NodeEntry* take_scalar_opt(const std::string& name) {
    const NodeEntry* found = nullptr;
    for (std::size_t i = 0; i < node_.entries.size(); ++i) {
      if (node_.entries[i].key != name) {
        continue;
      }
      if (found != nullptr) {
        throw error_at(node_.entries[i], "duplicate parameter '" + name + "'");
      }
      found = &node_.entries[i];
      used_[i] = true;
    }
    if (found != nullptr && found->is_block) {
      throw error_at(*found, "expected a value for '" + name + "', found a block");
    }
    return found;
  }

  const NodeEntry& take_scalar(const std::string& name) {
    const NodeEntry* entry = take_scalar_opt(name);
    if (entry == nullptr) {
      throw error("missing required parameter '" + name + "'");
    }
    return *entry;
  }

  double parse_double(const NodeEntry& entry, bool allow_infinite) const {
    const char* begin = entry.value.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
      throw error_at(entry, "could not parse number from '" + entry.value + "' for '" +
                                entry.key + "'");
    }
    if (std::isnan(value)) {
      throw error_at(entry, "'" + entry.key + "' must not be nan");
    }
    if (std::isinf(value) && !allow_infinite) {
      throw error_at(entry, "'" + entry.key + "' must be finite");
    }
    return value;
  }

  double take_num(const std::string& name, double lo, double hi) {
    const NodeEntry& entry = take_scalar(name);
    return check_range(entry, parse_double(entry, false), lo, hi);
  }

  std::optional<double> take_num_opt(const std::string& name, double lo, double hi) {
    const NodeEntry* entry = take_scalar_opt(name);
    if (entry == nullptr) {
      return std::nullopt;
    }
    return check_range(*entry, parse_double(*entry, false), lo, hi);
  }

  // Accepts -inf / inf for half-open quadrature windows.
  double take_num_or_infinite(const std::string& name) {
    const NodeEntry& entry = take_scalar(name);
    return parse_double(entry, true);
  }

  long long take_int(const std::string& name, long long lo, long long hi) {
    const NodeEntry& entry = take_scalar(name);
    return parse_integer(entry, lo, hi);
  }

  std::optional<long long> take_int_opt(const std::string& name, long long lo,
                                        long long hi) {
    const NodeEntry* entry = take_scalar_opt(name);
    if (entry == nullptr) {
      return std::nullopt;
    }
    return parse_integer(*entry, lo, hi);
  }

  std::uint64_t take_u64(const std::string& name) {
    const NodeEntry& entry = take_scalar(name);
    const char* begin = entry.value.c_str();
    char* end = nullptr;
    const unsigned long long value = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || entry.value[0] == '-') {
      throw error_at(entry, "'" + name + "' must be a non-negative integer, got '" +
                                entry.value + "'");
    }
    return value;
  }

  cplx take_complex(const std::string& name) {
    const double re = take_num(name + "_re", -kInf, kInf);
    const double im = take_num_opt(name + "_im", -kInf, kInf).value_or(0.0);
    return cplx(re, im);
  }

  std::optional<cplx> take_complex_opt(const std::string& name) {
    const std::optional<double> re = take_num_opt(name + "_re", -kInf, kInf);
    const std::optional<double> im = take_num_opt(name + "_im", -kInf, kInf);
    if (!re.has_value() && !im.has_value()) {
      return std::nullopt;
    }
    return cplx(re.value_or(0.0), im.value_or(0.0));
  }

  std::string take_enum(const std::string& name, const std::vector<std::string>& allowed) {
    const NodeEntry& entry = take_scalar(name);
    return check_enum(entry, allowed);
  }

  std::optional<std::string> take_enum_opt(const std::string& name,
                                           const std::vector<std::string>& allowed) {
    const NodeEntry* entry = take_scalar_opt(name);
    if (entry == nullptr) {
      return std::nullopt;
    }
    return check_enum(*entry, allowed);
  }

  std::string take_text(const std::string& name) {
    const NodeEntry& entry = take_scalar(name);
    return entry.value;
  }

  int take_mode(const std::string& name, int mode_count) {
    const NodeEntry& entry = take_scalar(name);
    const long long value = parse_integer(entry, std::numeric_limits<long long>::min(),
                                          std::numeric_limits<long long>::max());
    if (value < 0 || value >= mode_count) {
      throw error_at(entry, "mode index " + std::to_string(value) + " for '" + name +
                                "' is out of range; " + std::to_string(mode_count) +
                                " mode(s) are live here");
    }
    return static_cast<int>(value);
  }

  std::optional<int> take_mode_opt(const std::string& name, int mode_count) {
    if (!has(name)) {
      return std::nullopt;
    }
    return take_mode(name, mode_count);
  }

  std::vector<const Node*> take_blocks(const std::string& tag) {
    std::vector<const Node*> blocks;
    for (std::size_t i = 0; i < node_.entries.size(); ++i) {
      if (node_.entries[i].key != tag) {
        continue;
      }
      if (!node_.entries[i].is_block) {
        throw error_at(node_.entries[i],
                       "expected a block for '" + tag + "', found a value");
      }
      used_[i] = true;
      blocks.push_back(node_.entries[i].block.get());
    }
    return blocks;
  }

  const Node* take_block_opt(const std::string& tag) {
    std::vector<const Node*> blocks = take_blocks(tag);
    if (blocks.size() > 1) {
      throw error("at most one '" + tag + "' block is allowed");
    }
    return blocks.empty() ? nullptr : blocks.front();
  }

  void finish() const {
    for (std::size_t i = 0; i < node_.entries.size(); ++i) {
      if (!used_[i]) {
        throw error_at(node_.entries[i],
                       "unknown parameter '" + node_.entries[i].key + "'");
      }
    }
  }

 private:
  double check_range(const NodeEntry& entry, double value, double lo, double hi) const {
    if (value < lo || value > hi) {
      throw error_at(entry, "'" + entry.key + "' = " + entry.value +
                                " is outside the allowed range [" + format_double(lo) +
                                ", " + format_double(hi) + "]");
    }
    return value;
  }

  long long parse_integer(const NodeEntry& entry, long long lo, long long hi) const {
    const char* begin = entry.value.c_str();
    char* end = nullptr;
    const long long value = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0') {
      throw error_at(entry, "'" + entry.key + "' must be an integer, got '" +
                                entry.value + "'");
    }
    if (value < lo || value > hi) {
      throw error_at(entry, "'" + entry.key + "' = " + entry.value +
                                " is outside the allowed range [" + std::to_string(lo) +
                                ", " + std::to_string(hi) + "]");
    }
    return value;
  }

  std::string check_enum(const NodeEntry& entry,
                         const std::vector<std::string>& allowed) const {
    for (const std::string& option : allowed) {
      if (entry.value == option) {
        return entry.value;
      }
    }
    std::string known;
    for (const std::string& option : allowed) {
      known += known.empty() ? option : ", " + option;
    }
    throw error_at(entry, "unknown value '" + entry.value + "' for '" + entry.key +
                              "' (allowed: " + known + ")");
  }

  const Node& node_;
  std::string context_;
  mutable std::vector<bool> used_;
};

// ---------------------------------------------------------------------------
// State specifications (input blocks, fidelity_with targets)

StateSpec read_state_spec(Reader& reader) {
  StateSpec spec;
  const std::string kind = reader.take_enum(
      "kind", {"vacuum", "fock", "coherent", "thermal", "squeezed_vacuum", "cat", "epr",
               "sp_entangled", "hybrid", "two_mode_added_coherent"});
  spec.kind = parse_state_kind(kind);
  switch (spec.kind) {
    case StateKind::vacuum:
      break;
    case StateKind::fock:
      spec.n = static_cast<int>(reader.take_int("n", 0, 1000000));
      break;
    case StateKind::coherent:
      spec.alpha = reader.take_complex("alpha");
      break;
    case StateKind::thermal:
      spec.nbar = reader.take_num("nbar", 0.0, 1e9);
      break;
    case StateKind::squeezed_vacuum:
      spec.lambda = reader.take_num("lambda", -1.0, 1.0);
      if (std::abs(spec.lambda) >= 1.0) {
        throw reader.error("'lambda' must lie strictly inside (-1, 1)");
      }
      break;
    case StateKind::cat: {
      spec.alpha = reader.take_complex("alpha");
      const std::string parity = reader.take_enum("parity", {"even", "odd"});
      spec.parity = parity == "even" ? +1 : -1;
      break;
    }
    case StateKind::epr:
      spec.lambda = reader.take_num("lambda", -1.0, 1.0);
      if (std::abs(spec.lambda) >= 1.0) {
        throw reader.error("'lambda' must lie strictly inside (-1, 1)");
      }
      break;
    case StateKind::sp_entangled:
      spec.c1 = reader.take_complex("c1");
      spec.c2 = reader.take_complex("c2");
      spec.phi = reader.take_num("phi", -1e6, 1e6);
      break;
    case StateKind::hybrid: {
      spec.alpha = reader.take_complex("alpha");
      spec.phi = reader.take_num("phi", -1e6, 1e6);
      const std::optional<cplx> prime = reader.take_complex_opt("alpha_prime");
      if (prime.has_value()) {
        spec.alpha_prime = *prime;
        spec.has_alpha_prime = true;
      }
      break;
    }
    case StateKind::two_mode_added_coherent:
      spec.alpha = reader.take_complex("alpha");
      spec.phi = reader.take_num("phi", -1e6, 1e6);
      break;
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Detector blocks

SubBlock read_detector(const Node& node, const std::string& context) {
  Reader reader(node, context + " detector");
  SubBlock block;
  block.tag = "detector";
  block.line = node.line;
  block.column = node.column;
  const std::string kind = reader.take_enum("kind", {"projective", "on_off", "pnr"});
  block.strs["kind"] = kind;
  if (kind == "projective") {
    const std::optional<long long> n = reader.take_int_opt("n", 0, 1000);
    if (n.has_value()) {
      block.nums["n"] = static_cast<double>(*n);
    }
  } else if (kind == "on_off") {
    const std::optional<double> efficiency = reader.take_num_opt("efficiency", 0.0, 1.0);
    if (efficiency.has_value()) {
      block.nums["efficiency"] = *efficiency;
    }
    const std::optional<double> dark = reader.take_num_opt("dark_rate", 0.0, 1.0);
    if (dark.has_value()) {
      if (*dark >= 1.0) {
        throw reader.error("'dark_rate' must be below 1");
      }
      block.nums["dark_rate"] = *dark;
    }
  } else {
    const std::optional<double> efficiency = reader.take_num_opt("efficiency", 0.0, 1.0);
    if (efficiency.has_value()) {
      block.nums["efficiency"] = *efficiency;
    }
    const std::optional<long long> max_count = reader.take_int_opt("max_count", 1, 1000);
    if (max_count.has_value()) {
      block.nums["max_count"] = static_cast<double>(*max_count);
    }
  }
  reader.finish();
  return block;
}

// ---------------------------------------------------------------------------
// Stages

const std::vector<std::string>& stage_ops() {
  static const std::vector<std::string> ops = {
      "add_physical",     "affine_number_op", "apply_ideal",
      "apply_sequence",   "beam_splitter",    "condition_on_quadrature",
      "displacement",     "herald",           "herald_fock",
      "kerr_emulate",     "orthogonalize",    "phase_rotation",
      "project_fock",     "pure_loss",        "single_mode_squeeze",
      "subtract_physical", "superpose_sequences", "two_mode_squeeze"};
  return ops;
}

void store_complex(Stage& stage, const std::string& name, cplx value) {
  stage.nums[name + "_re"] = value.real();
  if (value.imag() != 0.0) {
    stage.nums[name + "_im"] = value.imag();
  }
}

// Validates one stage and updates the live mode count.
Stage read_stage(const Node& node, int stage_index, int& mode_count, int cutoff) {
  const std::string context = "stage " + std::to_string(stage_index);
  Reader reader(node, context);
  Stage stage;
  stage.line = node.line;
  stage.column = node.column;

  const NodeEntry& op_entry = reader.take_scalar("op");
  stage.op = op_entry.value;
  if (std::find(stage_ops().begin(), stage_ops().end(), stage.op) == stage_ops().end()) {
    std::string known;
    for (const std::string& op : stage_ops()) {
      known += known.empty() ? op : ", " + op;
    }
    throw reader.error_at(op_entry,
                          "unknown op '" + stage.op + "' (known ops: " + known + ")");
  }

  if (stage.op == "beam_splitter") {
    stage.nums["tau"] = reader.take_num("tau", -1e4, 1e4);
    const int mode_a = reader.take_mode("mode_a", mode_count);
    const int mode_b = reader.take_mode("mode_b", mode_count);
    if (mode_a == mode_b) {
      throw reader.error("'mode_a' and 'mode_b' must differ");
    }
    stage.nums["mode_a"] = mode_a;
    stage.nums["mode_b"] = mode_b;
  } else if (stage.op == "two_mode_squeeze") {
    stage.nums["zeta"] = reader.take_num("zeta", -5.0, 5.0);
    const int mode_a = reader.take_mode("mode_a", mode_count);
    const int mode_b = reader.take_mode("mode_b", mode_count);
    if (mode_a == mode_b) {
      throw reader.error("'mode_a' and 'mode_b' must differ");
    }
    stage.nums["mode_a"] = mode_a;
    stage.nums["mode_b"] = mode_b;
  } else if (stage.op == "single_mode_squeeze") {
    stage.nums["zeta"] = reader.take_num("zeta", -5.0, 5.0);
    stage.nums["mode"] = reader.take_mode("mode", mode_count);
  } else if (stage.op == "displacement") {
    store_complex(stage, "alpha", reader.take_complex("alpha"));
    stage.nums["mode"] = reader.take_mode("mode", mode_count);
  } else if (stage.op == "phase_rotation") {
    stage.nums["theta"] = reader.take_num("theta", -1e4, 1e4);
    stage.nums["mode"] = reader.take_mode("mode", mode_count);
  } else if (stage.op == "pure_loss") {
    stage.nums["eta"] = reader.take_num("eta", 0.0, 1.0);
    stage.nums["mode"] = reader.take_mode("mode", mode_count);
  } else if (stage.op == "apply_ideal") {
    const std::vector<const Node*> terms = reader.take_blocks("term");
    if (terms.empty()) {
      throw reader.error("apply_ideal needs at least one 'term' block");
    }
    for (const Node* term_node : terms) {
      Reader term_reader(*term_node, context + " term");
      SubBlock term;
      term.tag = "term";
      term.line = term_node->line;
      term.column = term_node->column;
      const cplx coeff = term_reader.take_complex("coeff");
      term.nums["coeff_re"] = coeff.real();
      if (coeff.imag() != 0.0) {
        term.nums["coeff_im"] = coeff.imag();
      }
      term.strs["kind"] = term_reader.take_enum("kind", {"add", "subtract", "identity"});
      if (term.strs["kind"] == "identity") {
        const std::optional<int> mode = term_reader.take_mode_opt("mode", mode_count);
        if (mode.has_value()) {
          term.nums["mode"] = *mode;
        }
      } else {
        term.nums["mode"] = term_reader.take_mode("mode", mode_count);
      }
      term_reader.finish();
      stage.subs.push_back(std::move(term));
    }
  } else if (stage.op == "subtract_physical" || stage.op == "add_physical") {
    stage.nums["mode"] = reader.take_mode("mode", mode_count);
    if (stage.op == "subtract_physical") {
      stage.nums["reflectivity"] = reader.take_num("reflectivity", 0.0, 1.0);
      if (stage.nums["reflectivity"] <= 0.0 || stage.nums["reflectivity"] >= 1.0) {
        throw reader.error("'reflectivity' must lie strictly inside (0, 1)");
      }
    } else {
      stage.nums["zeta"] = reader.take_num("zeta", 0.0, 1.0);
      if (stage.nums["zeta"] <= 0.0 || stage.nums["zeta"] >= 1.0) {
        throw reader.error("'zeta' must lie strictly inside (0, 1)");
      }
    }
    const Node* detector = reader.take_block_opt("detector");
    if (detector != nullptr) {
      stage.subs.push_back(read_detector(*detector, context));
    }
  } else if (stage.op == "herald_fock") {
    if (stage_index != 0) {
      throw reader.error("herald_fock prepares a fresh state and must be the first stage");
    }
    stage.nums["k"] = static_cast<double>(reader.take_int("k", 0, 1000));
    stage.nums["lambda"] = reader.take_num("lambda", -1.0, 1.0);
    if (std::abs(stage.nums["lambda"]) >= 1.0) {
      throw reader.error("'lambda' must lie strictly inside (-1, 1)");
    }
    stage.nums["tree_depth"] = static_cast<double>(reader.take_int("tree_depth", 0, 12));
    const Node* detector = reader.take_block_opt("detector");
    if (detector != nullptr) {
      stage.subs.push_back(read_detector(*detector, context));
    }
    mode_count = 1;
  } else if (stage.op == "condition_on_quadrature") {
    if (mode_count < 2) {
      throw reader.error("condition_on_quadrature consumes a mode, so at least two must be live");
    }
    stage.nums["mode"] = reader.take_mode("mode", mode_count);
    stage.nums["theta"] = reader.take_num("theta", -1e4, 1e4);
    const double x_lo = reader.take_num_or_infinite("x_lo");
    const double x_hi = reader.take_num_or_infinite("x_hi");
    if (!(x_lo < x_hi)) {
      throw reader.error("'x_lo' must be strictly below 'x_hi'");
    }
    stage.nums["x_lo"] = x_lo;
    stage.nums["x_hi"] = x_hi;
    mode_count -= 1;
  } else if (stage.op == "project_fock") {
    if (mode_count < 2) {
      throw reader.error("project_fock consumes a mode, so at least two must be live");
    }
    stage.nums["mode"] = reader.take_mode("mode", mode_count);
    stage.nums["n"] = static_cast<double>(reader.take_int("n", 0, cutoff));
    mode_count -= 1;
  } else if (stage.op == "herald") {
    const std::vector<const Node*> whens = reader.take_blocks("when");
    if (whens.empty()) {
      throw reader.error("herald needs at least one 'when' block");
    }
    if (static_cast<int>(whens.size()) >= mode_count) {
      throw reader.error("herald would consume every live mode; at least one must survive");
    }
    std::set<int> seen;
    for (const Node* when_node : whens) {
      Reader when_reader(*when_node, context + " when");
      SubBlock when;
      when.tag = "when";
      when.line = when_node->line;
      when.column = when_node->column;
      const int mode = when_reader.take_mode("mode", mode_count);
      if (!seen.insert(mode).second) {
        throw when_reader.error("duplicate herald mode " + std::to_string(mode));
      }
      when.nums["mode"] = mode;
      when.nums["n"] = static_cast<double>(when_reader.take_int("n", 0, cutoff));
      when_reader.finish();
      stage.subs.push_back(std::move(when));
    }
    mode_count -= static_cast<int>(whens.size());
  } else if (stage.op == "apply_sequence") {
    const std::optional<int> mode = reader.take_mode_opt("mode", mode_count);
    if (mode.has_value()) {
      stage.nums["mode"] = *mode;
    }
    const std::vector<const Node*> steps = reader.take_blocks("step");
    if (steps.empty()) {
      throw reader.error("apply_sequence needs at least one 'step' block");
    }
    for (const Node* step_node : steps) {
      Reader step_reader(*step_node, context + " step");
      SubBlock step;
      step.tag = "step";
      step.line = step_node->line;
      step.column = step_node->column;
      step.strs["kind"] = step_reader.take_enum("kind", {"add", "subtract"});
      step_reader.finish();
      stage.subs.push_back(std::move(step));
    }
  } else if (stage.op == "superpose_sequences") {
    store_complex(stage, "c1", reader.take_complex("c1"));
    store_complex(stage, "c2", reader.take_complex("c2"));
    const std::optional<int> mode = reader.take_mode_opt("mode", mode_count);
    if (mode.has_value()) {
      stage.nums["mode"] = *mode;
    }
  } else if (stage.op == "affine_number_op") {
    store_complex(stage, "a", reader.take_complex("a"));
    store_complex(stage, "b", reader.take_complex("b"));
    const std::optional<int> mode = reader.take_mode_opt("mode", mode_count);
    if (mode.has_value()) {
      stage.nums["mode"] = *mode;
    }
  } else if (stage.op == "orthogonalize") {
    stage.strs["c"] = reader.take_enum("c", {"creation", "number"});
    const std::optional<cplx> mu = reader.take_complex_opt("mu");
    if (mu.has_value()) {
      store_complex(stage, "mu", *mu);
    }
    const std::optional<cplx> nu = reader.take_complex_opt("nu");
    if (nu.has_value()) {
      store_complex(stage, "nu", *nu);
    }
    const std::optional<int> mode = reader.take_mode_opt("mode", mode_count);
    if (mode.has_value()) {
      stage.nums["mode"] = *mode;
    }
  } else if (stage.op == "kerr_emulate") {
    const std::optional<long long> subspace_max =
        reader.take_int_opt("subspace_max", 1, cutoff);
    if (subspace_max.has_value()) {
      stage.nums["subspace_max"] = static_cast<double>(*subspace_max);
    }
    const std::optional<int> mode = reader.take_mode_opt("mode", mode_count);
    if (mode.has_value()) {
      stage.nums["mode"] = *mode;
    }
  }

  reader.finish();
  return stage;
}

// ---------------------------------------------------------------------------
// Measurements

int modes_of_kind(StateKind kind) { return state_kind_modes(kind); }

bool valid_file_name(const std::string& name) {
  if (name.empty() || name.size() > 128) {
    return false;
  }
  if (name.front() == '.' || name.front() == '-') {
    return false;
  }
  for (const char c : name) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                    c == '_' || c == '-';
    if (!ok) {
      return false;
    }
  }
  return true;
}

Measurement read_measurement(const Node& node, int index, int mode_count, int cutoff,
                             std::set<std::string>& files) {
  const std::string context = "measure " + std::to_string(index);
  Reader reader(node, context);
  Measurement m;
  m.line = node.line;
  m.column = node.column;
  m.kind = reader.take_enum(
      "kind", {"save_state", "wigner", "photon_statistics", "discorrelation",
               "log_negativity", "mean_photon", "purity", "fidelity_with",
               "homodyne_samples", "tomography"});

  const auto take_file = [&]() {
    const NodeEntry& entry = reader.take_scalar("file");
    if (!valid_file_name(entry.value)) {
      throw reader.error_at(entry,
                            "'file' must be a plain relative file name "
                            "(letters, digits, '.', '_', '-')");
    }
    if (!files.insert(entry.value).second) {
      throw reader.error_at(entry, "output file '" + entry.value + "' is used twice");
    }
    m.strs["file"] = entry.value;
  };
  const auto take_mode_into = [&](const std::string& name) {
    const std::optional<int> mode = reader.take_mode_opt(name, mode_count);
    if (mode.has_value()) {
      m.nums[name] = *mode;
    }
  };

  if (m.kind == "save_state") {
    take_file();
  } else if (m.kind == "wigner") {
    take_mode_into("mode");
    take_file();
    const std::optional<double> half_width = reader.take_num_opt("half_width", 0.5, 100.0);
    if (half_width.has_value()) {
      m.nums["half_width"] = *half_width;
    }
    const std::optional<long long> points = reader.take_int_opt("points", 3, 2001);
    if (points.has_value()) {
      m.nums["points"] = static_cast<double>(*points);
    }
  } else if (m.kind == "photon_statistics") {
    take_mode_into("mode");
  } else if (m.kind == "discorrelation") {
    if (mode_count < 2) {
      throw reader.error("discorrelation needs at least two live modes");
    }
    take_mode_into("mode_a");
    take_mode_into("mode_b");
    const int mode_a = m.nums.count("mode_a") ? static_cast<int>(m.nums["mode_a"]) : 0;
    const int mode_b = m.nums.count("mode_b") ? static_cast<int>(m.nums["mode_b"]) : 1;
    if (mode_a == mode_b) {
      throw reader.error("'mode_a' and 'mode_b' must differ");
    }
  } else if (m.kind == "log_negativity") {
    if (mode_count < 2) {
      throw reader.error("log_negativity needs at least two live modes");
    }
    m.nums["side_a"] = reader.take_mode("side_a", mode_count);
  } else if (m.kind == "mean_photon") {
    take_mode_into("mode");
  } else if (m.kind == "purity") {
    // no parameters
  } else if (m.kind == "fidelity_with") {
    const Node* target_node = reader.take_block_opt("target");
    if (target_node == nullptr) {
      throw reader.error("fidelity_with needs a 'target' block");
    }
    Reader target_reader(*target_node, context + " target");
    StateSpec target = read_state_spec(target_reader);
    target_reader.finish();
    if (target.kind == StateKind::thermal) {
      throw reader.error("fidelity_with needs a pure target state");
    }
    if (modes_of_kind(target.kind) != mode_count) {
      throw reader.error("fidelity_with target spans " +
                         std::to_string(modes_of_kind(target.kind)) + " mode(s) but " +
                         std::to_string(mode_count) + " are live at the end");
    }
    m.target = target;
  } else if (m.kind == "homodyne_samples") {
    take_mode_into("mode");
    const std::optional<long long> phases = reader.take_int_opt("phases", 1, 256);
    if (phases.has_value()) {
      m.nums["phases"] = static_cast<double>(*phases);
    }
    m.nums["n_per_phase"] =
        static_cast<double>(reader.take_int("n_per_phase", 1, 10000000));
    take_file();
  } else if (m.kind == "tomography") {
    take_mode_into("mode");
    const std::optional<long long> phases = reader.take_int_opt("phases", 8, 256);
    if (phases.has_value()) {
      m.nums["phases"] = static_cast<double>(*phases);
    }
    m.nums["n_per_phase"] =
        static_cast<double>(reader.take_int("n_per_phase", 1, 10000000));
    const std::optional<long long> recon_cutoff = reader.take_int_opt("cutoff", 1, 60);
    if (recon_cutoff.has_value()) {
      m.nums["cutoff"] = static_cast<double>(*recon_cutoff);
    }
    const std::optional<double> bin_width = reader.take_num_opt("bin_width", 1e-3, 0.6);
    if (bin_width.has_value()) {
      m.nums["bin_width"] = *bin_width;
    }
    const std::optional<long long> max_iterations =
        reader.take_int_opt("max_iterations", 1, 100000);
    if (max_iterations.has_value()) {
      m.nums["max_iterations"] = static_cast<double>(*max_iterations);
    }
    const std::optional<double> tol = reader.take_num_opt("likelihood_tol", 1e-15, 0.1);
    if (tol.has_value()) {
      m.nums["likelihood_tol"] = *tol;
    }
    take_file();
  }

  reader.finish();
  (void)cutoff;
  return m;
}

// ---------------------------------------------------------------------------
// Printing

void print_pairs(std::ostream& out, const std::map<std::string, double>& nums,
                 const std::map<std::string, std::string>& strs) {
  for (const auto& [key, value] : nums) {
    out << ' ' << key << ' ' << format_double(value);
  }
  for (const auto& [key, value] : strs) {
    out << ' ' << key << ' ' << value;
  }
}

void print_state_spec(std::ostream& out, const StateSpec& spec) {
  out << " kind " << state_kind_name(spec.kind);
  const auto complex_field = [&](const std::string& name, cplx value) {
    out << ' ' << name << "_re " << format_double(value.real());
    if (value.imag() != 0.0) {
      out << ' ' << name << "_im " << format_double(value.imag());
    }
  };
  switch (spec.kind) {
    case StateKind::vacuum:
      break;
    case StateKind::fock:
      out << " n " << spec.n;
      break;
    case StateKind::coherent:
      complex_field("alpha", spec.alpha);
      break;
    case StateKind::thermal:
      out << " nbar " << format_double(spec.nbar);
      break;
    case StateKind::squeezed_vacuum:
      out << " lambda " << format_double(spec.lambda);
      break;
    case StateKind::cat:
      complex_field("alpha", spec.alpha);
      out << " parity " << (spec.parity >= 0 ? "even" : "odd");
      break;
    case StateKind::epr:
      out << " lambda " << format_double(spec.lambda);
      break;
    case StateKind::sp_entangled:
      complex_field("c1", spec.c1);
      complex_field("c2", spec.c2);
      out << " phi " << format_double(spec.phi);
      break;
    case StateKind::hybrid:
      complex_field("alpha", spec.alpha);
      if (spec.has_alpha_prime) {
        complex_field("alpha_prime", spec.alpha_prime);
      }
      out << " phi " << format_double(spec.phi);
      break;
    case StateKind::two_mode_added_coherent:
      complex_field("alpha", spec.alpha);
      out << " phi " << format_double(spec.phi);
      break;
  }
}

}  // namespace

CircuitPlan parse_plan(const std::string& text) {
  const std::vector<Token> tokens = tokenize(text);
  std::size_t pos = 0;
  const Node root = parse_entries(tokens, pos, true, 1, 1);

  CircuitPlan plan;
  bool seen_space = false;
  bool seen_seed = false;
  std::vector<const NodeEntry*> input_entries;
  std::vector<const NodeEntry*> stage_entries;
  std::vector<const NodeEntry*> measure_entries;

  for (const NodeEntry& entry : root.entries) {
    if (entry.key == "seed") {
      if (seen_seed) {
        throw PlanError("duplicate 'seed'", entry.line, entry.column);
      }
      seen_seed = true;
      if (entry.is_block) {
        throw PlanError("expected a value for 'seed', found a block", entry.line,
                        entry.column);
      }
      const char* begin = entry.value.c_str();
      char* end = nullptr;
      const unsigned long long value = std::strtoull(begin, &end, 10);
      if (end == begin || *end != '\0' || entry.value[0] == '-') {
        throw PlanError("'seed' must be a non-negative integer, got '" + entry.value + "'",
                        entry.line, entry.column);
      }
      plan.seed = value;
    } else if (entry.key == "space") {
      if (seen_space) {
        throw PlanError("duplicate 'space' block", entry.line, entry.column);
      }
      seen_space = true;
      if (!entry.is_block) {
        throw PlanError("expected a block for 'space', found a value", entry.line,
                        entry.column);
      }
      Reader reader(*entry.block, "space");
      plan.space.modes = static_cast<int>(reader.take_int("modes", 1, 16));
      plan.space.cutoff = static_cast<int>(reader.take_int("cutoff", 1, 120));
      reader.finish();
    } else if (entry.key == "input") {
      if (!entry.is_block) {
        throw PlanError("expected a block for 'input', found a value", entry.line,
                        entry.column);
      }
      input_entries.push_back(&entry);
    } else if (entry.key == "stage") {
      if (!entry.is_block) {
        throw PlanError("expected a block for 'stage', found a value", entry.line,
                        entry.column);
      }
      stage_entries.push_back(&entry);
    } else if (entry.key == "measure") {
      if (!entry.is_block) {
        throw PlanError("expected a block for 'measure', found a value", entry.line,
                        entry.column);
      }
      measure_entries.push_back(&entry);
    } else {
      throw PlanError("unknown top-level entry '" + entry.key +
                          "' (expected seed, space, input, stage, or measure)",
                      entry.line, entry.column);
    }
  }

  if (!seen_space) {
    throw PlanError("missing 'space' block", 1, 1);
  }

  // Inputs: each block binds one or two consecutive modes, no overlaps.
  std::set<int> bound_modes;
  for (std::size_t i = 0; i < input_entries.size(); ++i) {
    const NodeEntry& entry = *input_entries[i];
    Reader reader(*entry.block, "input " + std::to_string(i));
    InputDecl input;
    input.line = entry.line;
    input.column = entry.column;
    input.mode = reader.take_mode("mode", plan.space.modes);
    input.spec = read_state_spec(reader);
    reader.finish();
    const int span = modes_of_kind(input.spec.kind);
    if (input.mode + span > plan.space.modes) {
      throw PlanError("input " + std::to_string(i) + ": a " +
                          state_kind_name(input.spec.kind) + " input at mode " +
                          std::to_string(input.mode) + " needs " + std::to_string(span) +
                          " consecutive modes",
                      entry.line, entry.column);
    }
    for (int m = input.mode; m < input.mode + span; ++m) {
      if (!bound_modes.insert(m).second) {
        throw PlanError("input " + std::to_string(i) + ": mode " + std::to_string(m) +
                            " already has an input",
                        entry.line, entry.column);
      }
    }
    plan.inputs.push_back(std::move(input));
  }

  // Stages, tracking how many modes stay live.
  int mode_count = plan.space.modes;
  for (std::size_t i = 0; i < stage_entries.size(); ++i) {
    Stage stage = read_stage(*stage_entries[i]->block, static_cast<int>(i), mode_count,
                             plan.space.cutoff);
    if (stage.op == "herald_fock") {
      if (plan.space.modes != 1) {
        throw PlanError("stage 0: herald_fock plans must declare 'modes 1' (the signal)",
                        stage.line, stage.column);
      }
      if (!plan.inputs.empty()) {
        throw PlanError("stage 0: herald_fock prepares the state, so 'input' blocks are "
                        "not allowed",
                        stage.line, stage.column);
      }
    }
    plan.stages.push_back(std::move(stage));
  }

  std::set<std::string> files;
  for (std::size_t i = 0; i < measure_entries.size(); ++i) {
    plan.measurements.push_back(read_measurement(*measure_entries[i]->block,
                                                 static_cast<int>(i), mode_count,
                                                 plan.space.cutoff, files));
  }

  return plan;
}

std::string print_plan(const CircuitPlan& plan) {
  std::ostringstream out;
  out << "seed " << plan.seed << "\n";
  out << "space { modes " << plan.space.modes << " cutoff " << plan.space.cutoff
      << " }\n";
  for (const InputDecl& input : plan.inputs) {
    out << "input { mode " << input.mode;
    print_state_spec(out, input.spec);
    out << " }\n";
  }
  for (const Stage& stage : plan.stages) {
    out << "stage { op " << stage.op;
    print_pairs(out, stage.nums, stage.strs);
    for (const SubBlock& sub : stage.subs) {
      out << ' ' << sub.tag << " {";
      print_pairs(out, sub.nums, sub.strs);
      out << " }";
    }
    out << " }\n";
  }
  for (const Measurement& m : plan.measurements) {
    out << "measure { kind " << m.kind;
    print_pairs(out, m.nums, m.strs);
    if (m.target.has_value()) {
      out << " target {";
      print_state_spec(out, *m.target);
      out << " }";
    }
    out << " }\n";
  }
  return out.str();
}

int final_mode_count(const CircuitPlan& plan) {
  int mode_count = plan.space.modes;
  for (const Stage& stage : plan.stages) {
    if (stage.op == "herald_fock") {
      mode_count = 1;
    } else if (stage.op == "condition_on_quadrature" || stage.op == "project_fock") {
      mode_count -= 1;
    } else if (stage.op == "herald") {
      int whens = 0;
      for (const SubBlock& sub : stage.subs) {
        if (sub.tag == "when") {
          ++whens;
        }
      }
      mode_count -= whens;
    }
  }
  return mode_count;
}

}  // namespace focksmith
