// Built-in scenarios reproducing the rotating-field figures.
#pragma once

#include <string>
#include <vector>

#include "adiactl/scenario.hpp"

namespace adiactl {

struct PresetInfo {
  std::string name;
  std::string description;
};

std::vector<PresetInfo> preset_list();

/// Throws ScenarioError for an unknown name.
Scenario preset(const std::string& name);

}  // namespace adiactl
