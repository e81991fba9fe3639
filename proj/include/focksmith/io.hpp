#pragma once

#include <map>
#include <string>
#include <vector>

#include "focksmith/state.hpp"

namespace focksmith {

/// 17-significant-digit decimal rendering; round-trips doubles exactly.
std::string format_double(double value);

/// Line-based state format: a header of `num_modes`, `cutoff`, and `kind`
/// (ket or density), then one row per entry — `index re im` for kets,
/// `row col re im` for matrices.
std::string state_to_text(const State& state);
State state_from_text(const std::string& text);

void save_state(const State& state, const std::string& path);
State load_state(const std::string& path);

/// Flat key/value metrics, one `key value` pair per line in insertion order.
class Metrics {
 public:
  void put(const std::string& key, double value);
  void put(const std::string& key, const std::string& value);
  void put(const std::string& key, long long value);

  bool has(const std::string& key) const;
  double get_double(const std::string& key) const;
  const std::string& get_raw(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_text() const;
  static Metrics from_text(const std::string& text);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

void save_metrics(const Metrics& metrics, const std::string& path);
Metrics load_metrics(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace focksmith
