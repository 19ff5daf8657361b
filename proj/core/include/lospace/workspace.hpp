#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <string_view>

namespace lospace {

struct LabelUsage {
  std::int64_t current_bits = 0;
  std::int64_t peak_bits = 0;
};

// Counts the bits held by registered working buffers. Inputs and emitted outputs are
// never registered, so the peak is the working-space figure.
class WorkspaceMeter {
 public:
  void add(std::string_view label, std::int64_t bits);

  std::int64_t current_bits() const;
  std::int64_t peak_bits() const;
  std::int64_t current_bytes() const { return (current_bits() + 7) / 8; }
  std::int64_t peak_bytes() const { return (peak_bits() + 7) / 8; }
  std::map<std::string, LabelUsage> breakdown() const;
  void reset_peak();

 private:
  mutable std::mutex mutex_;
  std::int64_t current_ = 0;
  std::int64_t peak_ = 0;
  std::map<std::string, LabelUsage, std::less<>> labels_;
};

// The meter that charges are recorded against, or null.
WorkspaceMeter* active_meter();

// Installs a meter as the active one for the lifetime of the scope.
class MeterScope {
 public:
  explicit MeterScope(WorkspaceMeter& meter);
  ~MeterScope();
  MeterScope(const MeterScope&) = delete;
  MeterScope& operator=(const MeterScope&) = delete;

 private:
  WorkspaceMeter* previous_;
};

// A registered buffer. Releases its bits on destruction. The label must outlive the
// charge; string literals are expected.
class Charge {
 public:
  Charge() = default;
  Charge(std::string_view label, std::int64_t bits);
  Charge(Charge&& other) noexcept;
  Charge& operator=(Charge&& other) noexcept;
  Charge(const Charge&) = delete;
  Charge& operator=(const Charge&) = delete;
  ~Charge();

  void resize(std::int64_t bits);
  std::int64_t bits() const { return bits_; }

 private:
  void release();

  WorkspaceMeter* meter_ = nullptr;
  const char* label_ = "";
  std::int64_t bits_ = 0;
};

}  // namespace lospace
