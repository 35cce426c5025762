#pragma once

#include <string>

#include "minudesc/matching.hpp"

namespace minudesc {

// Line-oriented text template format with exact float round-tripping.
// Numeric fields are written with shortest-exact decimal encoding.
void save_template(const std::string& path, const Template& t);
Template load_template(const std::string& path);

}  // namespace minudesc
