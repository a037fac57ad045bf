#pragma once

namespace gibbsids {

inline constexpr const char* kVersion = "0.1.0";

}
