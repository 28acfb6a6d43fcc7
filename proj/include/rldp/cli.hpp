#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rldp/rate.hpp"

namespace rldp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the renewal_ldp tool; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

/// "lo:hi:n" per axis, axes separated by ';'.
std::vector<GridAxis> parse_grid(std::string_view text);

/// Comma-separated integers.
std::vector<long> parse_long_list(std::string_view text);

}  // namespace rldp
