#ifndef QJUMP_VERSION_HPP
#define QJUMP_VERSION_HPP

namespace qjump {

inline constexpr const char* kVersion = "0.1.0";

} // namespace qjump

#endif
