#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace nims {

// Keyword extraction for the CLI's document mode: ASCII-lowercase, split
// on anything outside [a-z0-9], drop tokens shorter than 3, return sorted
// and deduplicated.
std::vector<std::string> tokenize_document(std::string_view text);

}  // namespace nims
