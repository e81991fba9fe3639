#include "focksmith/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace focksmith {

namespace {

double parse_double(const std::string& token, const std::string& context) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw IoError(context + ": expected a number, got '" + token + "'");
  }
  if (used != token.size()) {
    throw IoError(context + ": trailing characters in number '" + token + "'");
  }
  return value;
}

long long parse_int(const std::string& token, const std::string& context) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(token, &used);
  } catch (const std::exception&) {
    throw IoError(context + ": expected an integer, got '" + token + "'");
  }
  if (used != token.size()) {
    throw IoError(context + ": trailing characters in integer '" + token + "'");
  }
  return value;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string state_to_text(const State& state) {
  const ModeSpace& space = state.space();
  std::ostringstream out;
  out << "num_modes " << space.num_modes() << "\n";
  out << "cutoff " << space.cutoff() << "\n";
  if (state.is_pure()) {
    out << "kind ket\n";
    const Vec& amp = state.ket().amplitudes();
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
      out << i << ' ' << format_double(amp(i).real()) << ' ' << format_double(amp(i).imag())
          << "\n";
    }
  } else {
    out << "kind density\n";
    const Mat& rho = state.rho().matrix();
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        out << r << ' ' << c << ' ' << format_double(rho(r, c).real()) << ' '
            << format_double(rho(r, c).imag()) << "\n";
      }
    }
  }
  return out.str();
}

State state_from_text(const std::string& text) {
  std::istringstream stream(text);
  std::string line;
  int num_modes = -1;
  int cutoff = -1;
  std::string kind;
  for (int header = 0; header < 3; ++header) {
    if (!std::getline(stream, line)) throw IoError("state file: truncated header");
    const auto tokens = split_ws(line);
    if (tokens.size() != 2) throw IoError("state file: malformed header line '" + line + "'");
    if (tokens[0] == "num_modes") {
      num_modes = static_cast<int>(parse_int(tokens[1], "state file num_modes"));
    } else if (tokens[0] == "cutoff") {
      cutoff = static_cast<int>(parse_int(tokens[1], "state file cutoff"));
    } else if (tokens[0] == "kind") {
      kind = tokens[1];
    } else {
      throw IoError("state file: unknown header key '" + tokens[0] + "'");
    }
  }
  if (num_modes < 1 || cutoff < 1) throw IoError("state file: header incomplete or out of range");
  if (kind != "ket" && kind != "density") {
    throw IoError("state file: kind must be 'ket' or 'density'");
  }
  ModeSpace space(num_modes, cutoff);
  if (kind == "ket") {
    Vec amp = Vec::Zero(space.dim());
    while (std::getline(stream, line)) {
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.size() != 3) throw IoError("state file: ket rows need 'index re im'");
      const long long i = parse_int(tokens[0], "state file index");
      if (i < 0 || i >= space.dim()) throw IoError("state file: index out of range");
      amp(i) = cplx(parse_double(tokens[1], "state file re"),
                    parse_double(tokens[2], "state file im"));
    }
    return State(Ket(space, std::move(amp)));
  }
  Mat rho = Mat::Zero(space.dim(), space.dim());
  while (std::getline(stream, line)) {
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 4) throw IoError("state file: density rows need 'row col re im'");
    const long long r = parse_int(tokens[0], "state file row");
    const long long c = parse_int(tokens[1], "state file col");
    if (r < 0 || r >= space.dim() || c < 0 || c >= space.dim()) {
      throw IoError("state file: row/col out of range");
    }
    rho(r, c) =
        cplx(parse_double(tokens[2], "state file re"), parse_double(tokens[3], "state file im"));
  }
  return State(DensityOperator(space, std::move(rho)));
}

void save_state(const State& state, const std::string& path) {
  write_text_file(path, state_to_text(state));
}

State load_state(const std::string& path) { return state_from_text(read_text_file(path)); }

void Metrics::put(const std::string& key, double value) {
  entries_.emplace_back(key, format_double(value));
}

void Metrics::put(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}

void Metrics::put(const std::string& key, long long value) {
  entries_.emplace_back(key, std::to_string(value));
}

bool Metrics::has(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return true;
  }
  return false;
}

double Metrics::get_double(const std::string& key) const {
  return parse_double(get_raw(key), "metrics '" + key + "'");
}

const std::string& Metrics::get_raw(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  throw IoError("metrics: missing key '" + key + "'");
}

std::string Metrics::to_text() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << ' ' << v << "\n";
  return out.str();
}

Metrics Metrics::from_text(const std::string& text) {
  Metrics m;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    const auto pos = line.find(' ');
    if (pos == std::string::npos) throw IoError("metrics: malformed line '" + line + "'");
    m.put(line.substr(0, pos), line.substr(pos + 1));
  }
  return m;
}

void save_metrics(const Metrics& metrics, const std::string& path) {
  write_text_file(path, metrics.to_text());
}

Metrics load_metrics(const std::string& path) { return Metrics::from_text(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

}  // namespace focksmith
