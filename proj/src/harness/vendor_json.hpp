#ifndef FBU_VENDOR_JSON_HPP
#define FBU_VENDOR_JSON_HPP

// Single include point for the vendored nlohmann/json header so warnings can
// be scoped here if needed.
#include "json.hpp"

#endif
