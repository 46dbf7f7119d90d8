#ifndef EHCONTRACT_VERSION_HPP
#define EHCONTRACT_VERSION_HPP

namespace ehc {
inline constexpr const char* kVersion = "1.0.0";
}

#endif
