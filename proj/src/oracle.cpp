#include "nims/oracle.hpp"

#include "nims/common.hpp"

namespace nims {

void OracleIndex::add(const std::string& ind,
                      const std::vector<std::string>& keywords) {
  auto& kws = forward_[ind];
  for (const std::string& w : keywords) {
    kws.insert(w);
    inverted_[w].insert(ind);
  }
}

bool OracleIndex::remove(const std::string& ind) {
  auto it = forward_.find(ind);
  if (it == forward_.end()) return false;
  for (const std::string& w : it->second) {
    auto inv = inverted_.find(w);
    inv->second.erase(ind);
    if (inv->second.empty()) inverted_.erase(inv);
  }
  forward_.erase(it);
  return true;
}

std::vector<std::string> OracleIndex::search(const std::string& w) const {
  auto it = inverted_.find(w);
  if (it == inverted_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

void OracleIndex::self_check() const {
  size_t postings = 0;
  for (const auto& [ind, kws] : forward_) {
    for (const std::string& w : kws) {
      auto it = inverted_.find(w);
      if (it == inverted_.end() || it->second.count(ind) == 0)
        throw IntegrityError("oracle: forward entry missing from inverted map");
      postings += 1;
    }
  }
  size_t inv_postings = 0;
  for (const auto& [w, inds] : inverted_) {
    if (inds.empty()) throw IntegrityError("oracle: empty posting list kept");
    inv_postings += inds.size();
    for (const std::string& ind : inds) {
      auto it = forward_.find(ind);
      if (it == forward_.end() || it->second.count(w) == 0)
        throw IntegrityError("oracle: inverted entry missing from forward map");
    }
  }
  if (postings != inv_postings)
    throw IntegrityError("oracle: posting counts disagree");
}

}  // namespace nims
