#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nims/bwma.hpp"
#include "nims/common.hpp"

namespace nims::testutil {

inline std::filesystem::path vectors_dir() {
  if (const char* env = std::getenv("NIMS_VECTORS_DIR")) return env;
  return "vectors";
}

// Tab-separated rows of the committed golden-vector file.
inline std::vector<std::vector<std::string>> load_tsv(const std::string& name) {
  std::ifstream in(vectors_dir() / name);
  if (!in) throw Error("cannot open vector file " + name);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::istringstream ls(line);
    std::string col;
    while (std::getline(ls, col, '\t')) cols.push_back(col);
    rows.push_back(std::move(cols));
  }
  return rows;
}

// "10*1" -> {One, Zero, Star, One}
inline WildcardVec pat(const std::string& s) {
  WildcardVec v;
  for (char c : s) {
    if (c == '0')
      v.push_back(Sym::Zero);
    else if (c == '1')
      v.push_back(Sym::One);
    else
      v.push_back(Sym::Star);
  }
  return v;
}

inline BitVec bits(const std::string& s) {
  BitVec v;
  for (char c : s) v.push_back(c == '1' ? 1 : 0);
  return v;
}

// Self-deleting scratch directory.
struct TmpDir {
  std::filesystem::path path;
  TmpDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "nims-test-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!::mkdtemp(buf.data())) throw Error("mkdtemp failed");
    path = buf.data();
  }
  ~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace nims::testutil
