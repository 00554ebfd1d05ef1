#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "commands.hpp"

namespace akg {

std::string sha256_hex(const std::string& bytes);

nlohmann::json to_json(const Report& r);
std::string to_text(const Report& r);

}  // namespace akg
