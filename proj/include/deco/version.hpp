#ifndef DECO_VERSION_HPP
#define DECO_VERSION_HPP

namespace deco {
inline constexpr const char* version = "0.1.0";
}

#endif
