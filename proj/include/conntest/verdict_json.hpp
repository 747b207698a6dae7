#pragma once

#include "json.hpp"

#include "conntest/tester.hpp"

namespace conntest {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const SquareRef& square);
nlohmann::json to_json(PixelCoord p);
nlohmann::json to_json(const Verdict& verdict);

}  // namespace conntest
