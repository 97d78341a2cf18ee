#pragma once

#include <cstdint>
#include <string>

#include "nims/params.hpp"

namespace nims {

// Seeded mixed-operation driver that mirrors every Add/Delete into a
// plaintext oracle and checks every Search against it. Exercises either
// the in-process engine or a live server over TCP.
struct FuzzConfig {
  uint64_t seed = 1;
  int ops = 220;
  int vocab = 24;
  int max_kws_per_doc = 6;
  SchemeParams params{256, 32, 16, 0};  // trimmed dims: same code paths, desk speed
  std::string server_addr;              // empty: in-process engine
  bool verbose = false;
};

struct FuzzReport {
  int adds = 0;
  int deletes = 0;
  int searches = 0;
  int mismatches = 0;
  std::string first_mismatch;

  bool ok() const { return mismatches == 0; }
};

FuzzReport run_fuzz(const FuzzConfig& cfg);

}  // namespace nims
