#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ragloop::util {

std::uint64_t fnv1a64(std::string_view data) noexcept;

/// 16 lowercase hex digits.
std::string fingerprint(std::string_view data);

} // namespace ragloop::util
