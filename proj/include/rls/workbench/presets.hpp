#pragma once

#include <string>
#include <vector>

#include "rls/workbench/config.hpp"

namespace rls::wb {

/// case1_pci_pid, case1_shaped, case1_pi2d, case2_pid, case2_cglp,
/// case2_shaped_cglp
const std::vector<std::string>& preset_names();

/// Throws ConfigError for an unknown name.
WorkbenchConfig preset(const std::string& name);

/// Controllers compared in a case study, in reporting order.
std::vector<std::string> case_members(const std::string& case_name);

}  // namespace rls::wb
