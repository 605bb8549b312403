#include "arena/curriculum/layout.hpp"

#include <algorithm>

#include "arena/core/error.hpp"

namespace arena::curriculum {

ObservationLayout::ObservationLayout(std::vector<Slot> slots) : slots_(std::move(slots)) {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].width == 0) throw ConfigError("slot '" + slots_[i].name + "' has zero width");
    for (std::size_t j = 0; j < i; ++j) {
      if (slots_[j].name == slots_[i].name) throw ConfigError("duplicate slot name '" + slots_[i].name + "'");
    }
    offsets_.push_back(total_width_);
    total_width_ += slots_[i].width;
  }
}

std::size_t ObservationLayout::find(const std::string& name) const {
  auto it = std::find_if(slots_.begin(), slots_.end(), [&](const Slot& s) { return s.name == name; });
  return static_cast<std::size_t>(it - slots_.begin());
}

std::vector<std::string> ObservationLayout::active_names(int stage) const {
  std::vector<std::string> out;
  for (const auto& s : slots_)
    if (s.active_in(stage)) out.push_back(s.name);
  return out;
}

std::vector<double> pad_observation(const NamedFeatures& features, const ObservationLayout& layout,
                                    int stage) {
  std::vector<double> out(layout.total_width(), 0.0);
  std::vector<bool> written(layout.slots().size(), false);
  for (const auto& [name, values] : features) {
    const std::size_t idx = layout.find(name);
    if (idx == layout.slots().size()) throw ContractError("unknown observation slot '" + name + "'");
    const Slot& slot = layout.slots()[idx];
    if (!slot.active_in(stage)) {
      throw ContractError("slot '" + name + "' is inactive in stage " + std::to_string(stage));
    }
    if (values.size() != slot.width) {
      throw ContractError("slot '" + name + "' expects width " + std::to_string(slot.width));
    }
    std::copy(values.begin(), values.end(), out.begin() + static_cast<std::ptrdiff_t>(layout.offset(idx)));
    written[idx] = true;
  }
  for (std::size_t i = 0; i < written.size(); ++i) {
    if (layout.slots()[i].active_in(stage) && !written[i]) {
      throw ContractError("missing active feature '" + layout.slots()[i].name + "'");
    }
  }
  return out;
}

}  // namespace arena::curriculum
