#pragma once

#include <string>

#include "stieltjes/derivator.hpp"

namespace stieltjes {

/// Builds a derivator from a JSON descriptor (schema in docs/derivator-descriptor.md).
/// Throws std::invalid_argument on malformed input.
Derivator derivator_from_json(const std::string& text);
Derivator derivator_from_file(const std::string& path);

}  // namespace stieltjes
