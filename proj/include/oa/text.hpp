// Small ASCII string helpers used by the parsers.
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace oa::text {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;

// Splits on `sep`, trims every piece and drops empty ones.
std::vector<std::string> split_list(std::string_view s, char sep = ';');

}  // namespace oa::text
