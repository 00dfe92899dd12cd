#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "specrange/family.hpp"

namespace specrange {

// named model builders; dim = 0 picks each preset's default size
Family make_preset(const std::string& name, std::size_t dim = 0);

std::vector<std::string> preset_names();

}  // namespace specrange
