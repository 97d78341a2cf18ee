#include "nims/tokenize.hpp"

#include <algorithm>
#include <set>

namespace nims {

std::vector<std::string> tokenize_document(std::string_view text) {
  std::set<std::string> seen;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 3) seen.insert(cur);
    cur.clear();
  };
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))
      cur.push_back(c);
    else
      flush();
  }
  flush();
  return {seen.begin(), seen.end()};
}

}  // namespace nims
