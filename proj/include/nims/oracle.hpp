#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace nims {

// Plaintext inverted index kept alongside the encrypted one in tests;
// search answers must match it exactly.
class OracleIndex {
 public:
  void add(const std::string& ind, const std::vector<std::string>& keywords);
  bool remove(const std::string& ind);
  std::vector<std::string> search(const std::string& w) const;  // sorted
  bool contains(const std::string& ind) const { return forward_.count(ind) != 0; }
  size_t live_docs() const { return forward_.size(); }

  // Forward and inverted maps must mirror each other.
  void self_check() const;

 private:
  std::map<std::string, std::set<std::string>> forward_;   // ind -> keywords
  std::map<std::string, std::set<std::string>> inverted_;  // keyword -> inds
};

}  // namespace nims
