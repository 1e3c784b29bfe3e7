#ifndef HYPERGROWTH_VERSION_HPP
#define HYPERGROWTH_VERSION_HPP

#include <string_view>

namespace hypergrowth {

inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace hypergrowth

#endif  // HYPERGROWTH_VERSION_HPP
