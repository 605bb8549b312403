#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace arena::curriculum {

inline constexpr int kNeverActive = -1;

/// One named block of observation features. A slot with
/// active_from_stage == kNeverActive is a zero-buffer placeholder.
struct Slot {
  std::string name;
  std::size_t width = 0;
  int active_from_stage = 0;

  bool active_in(int stage) const { return active_from_stage != kNeverActive && stage >= active_from_stage; }
  friend bool operator==(const Slot&, const Slot&) = default;
};

/// Declarative, ordered slot map. Offsets are fixed once constructed, so an
/// agent's observation width is the same in every curriculum stage.
class ObservationLayout {
 public:
  ObservationLayout() = default;
  /// Throws ConfigError on duplicate names or zero-width slots.
  explicit ObservationLayout(std::vector<Slot> slots);

  std::span<const Slot> slots() const { return slots_; }
  std::size_t total_width() const { return total_width_; }
  std::size_t offset(std::size_t slot_index) const { return offsets_[slot_index]; }
  /// Index of the named slot, or slots().size() when absent.
  std::size_t find(const std::string& name) const;
  /// Names of slots active at the given stage, in layout order.
  std::vector<std::string> active_names(int stage) const;

  friend bool operator==(const ObservationLayout&, const ObservationLayout&) = default;

 private:
  std::vector<Slot> slots_;
  std::vector<std::size_t> offsets_;
  std::size_t total_width_ = 0;
};

using NamedFeatures = std::vector<std::pair<std::string, std::vector<double>>>;

/// Writes supplied features into their slots; inactive and buffer slots are
/// exactly 0.0. Missing active features, writes to inactive slots, unknown
/// names and width mismatches raise ContractError.
std::vector<double> pad_observation(const NamedFeatures& features, const ObservationLayout& layout,
                                    int stage);

}  // namespace arena::curriculum
