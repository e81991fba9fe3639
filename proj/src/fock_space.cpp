#include "focksmith/fock_space.hpp"

#include <iostream>
#include <mutex>

namespace focksmith {

namespace {

constexpr std::int64_t kMaxDim = 1 << 24;

WarningHandler& handler_slot() {
  static WarningHandler handler = [](const std::string& msg) {
    std::cerr << "[focksmith] warning: " << msg << "\n";
  };
  return handler;
}

}  // namespace

void set_warning_handler(WarningHandler handler) {
  handler_slot() = std::move(handler);
}

void emit_warning(const std::string& message) {
  if (handler_slot()) handler_slot()(message);
}

WarningCollector::WarningCollector() : previous_(handler_slot()) {
  set_warning_handler([this](const std::string& msg) { messages_.push_back(msg); });
}

WarningCollector::~WarningCollector() { set_warning_handler(previous_); }

ModeSpace::ModeSpace(int num_modes, int cutoff)
    : num_modes_(num_modes), cutoff_(cutoff) {
  if (num_modes < 1) throw std::invalid_argument("ModeSpace: num_modes must be >= 1");
  if (cutoff < 1) throw std::invalid_argument("ModeSpace: cutoff must be >= 1");
  dim_ = 1;
  for (int m = 0; m < num_modes; ++m) {
    dim_ *= cutoff + 1;
    if (dim_ > kMaxDim)
      throw std::invalid_argument("ModeSpace: dimension exceeds supported maximum");
  }
}

std::int64_t ModeSpace::stride(int mode) const {
  check_mode(mode);
  std::int64_t s = 1;
  for (int m = num_modes_ - 1; m > mode; --m) s *= levels();
  return s;
}

std::int64_t ModeSpace::index_of(const std::vector<int>& occupation) const {
  if (static_cast<int>(occupation.size()) != num_modes_)
    throw std::invalid_argument("ModeSpace: occupation length mismatch");
  std::int64_t idx = 0;
  for (int m = 0; m < num_modes_; ++m) {
    if (occupation[m] < 0 || occupation[m] > cutoff_)
      throw std::invalid_argument("ModeSpace: occupation out of range");
    idx = idx * levels() + occupation[m];
  }
  return idx;
}

std::vector<int> ModeSpace::occupation_of(std::int64_t index) const {
  std::vector<int> occ(num_modes_);
  for (int m = num_modes_ - 1; m >= 0; --m) {
    occ[m] = static_cast<int>(index % levels());
    index /= levels();
  }
  return occ;
}

int ModeSpace::mode_occupation(std::int64_t index, int mode) const {
  return static_cast<int>((index / stride(mode)) % levels());
}

void ModeSpace::check_mode(int mode) const {
  if (mode < 0 || mode >= num_modes_)
    throw std::invalid_argument("ModeSpace: mode index out of range");
}

void ModeSpace::check_same(const ModeSpace& other) const {
  if (!(*this == other))
    throw std::invalid_argument("ModeSpace: operands live in different mode spaces");
}

}  // namespace focksmith
