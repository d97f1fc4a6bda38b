#pragma once

namespace pdc {

inline constexpr const char* kVersion = "0.1.0";

}
