#include "lospace/workspace.hpp"

#include <algorithm>
#include <atomic>

namespace lospace {

namespace {
std::atomic<WorkspaceMeter*> g_active{nullptr};
}

void WorkspaceMeter::add(std::string_view label, std::int64_t bits) {
  std::lock_guard lock(mutex_);
  current_ += bits;
  peak_ = std::max(peak_, current_);
  auto it = labels_.find(label);
  if (it == labels_.end()) it = labels_.emplace(std::string(label), LabelUsage{}).first;
  it->second.current_bits += bits;
  it->second.peak_bits = std::max(it->second.peak_bits, it->second.current_bits);
}

std::int64_t WorkspaceMeter::current_bits() const {
  std::lock_guard lock(mutex_);
  return current_;
}

std::int64_t WorkspaceMeter::peak_bits() const {
  std::lock_guard lock(mutex_);
  return peak_;
}

std::map<std::string, LabelUsage> WorkspaceMeter::breakdown() const {
  std::lock_guard lock(mutex_);
  return {labels_.begin(), labels_.end()};
}

void WorkspaceMeter::reset_peak() {
  std::lock_guard lock(mutex_);
  peak_ = current_;
  for (auto& [name, usage] : labels_) usage.peak_bits = usage.current_bits;
}

WorkspaceMeter* active_meter() { return g_active.load(std::memory_order_acquire); }

MeterScope::MeterScope(WorkspaceMeter& meter) : previous_(g_active.exchange(&meter)) {}

MeterScope::~MeterScope() { g_active.store(previous_); }

Charge::Charge(std::string_view label, std::int64_t bits) : meter_(active_meter()), label_(label.data()) {
  resize(bits);
}

Charge::Charge(Charge&& other) noexcept
    : meter_(other.meter_), label_(other.label_), bits_(other.bits_) {
  other.meter_ = nullptr;
  other.bits_ = 0;
}

Charge& Charge::operator=(Charge&& other) noexcept {
  if (this != &other) {
    release();
    meter_ = other.meter_;
    label_ = other.label_;
    bits_ = other.bits_;
    other.meter_ = nullptr;
    other.bits_ = 0;
  }
  return *this;
}

Charge::~Charge() { release(); }

void Charge::resize(std::int64_t bits) {
  if (meter_ && bits != bits_) meter_->add(label_, bits - bits_);
  bits_ = bits;
}

void Charge::release() {
  if (meter_ && bits_ != 0) meter_->add(label_, -bits_);
  bits_ = 0;
}

}  // namespace lospace
