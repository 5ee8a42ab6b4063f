#pragma once

namespace sealci {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace sealci
