#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sentindex::text {

// Unicode simple lowercasing of a UTF-8 string. Invalid byte sequences are
// copied through unchanged.
std::string to_lower(std::string_view utf8);

// Maximal runs of non-whitespace characters (ASCII whitespace).
std::vector<std::string_view> whitespace_tokens(std::string_view s);
std::size_t count_tokens(std::string_view s);

// Strips leading and trailing ASCII punctuation.
std::string_view strip_punctuation(std::string_view token);

bool contains(std::string_view haystack, std::string_view needle);

}  // namespace sentindex::text
