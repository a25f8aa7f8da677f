// Copyright 2026 The mtrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MTROBUST_TESTS_TEST_UTIL_H_
#define MTROBUST_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtrobust/random.h"

namespace mtrobust {
namespace testing_util {

// Replays a fixed script of draws. Running past the end is a test bug.
class ScriptedStream : public RandomStream {
 public:
  ScriptedStream(std::vector<size_t> indices, std::vector<double> reals = {})
      : indices_(indices.begin(), indices.end()),
        reals_(reals.begin(), reals.end()) {}

  size_t UniformIndex(size_t n) override {
    if (indices_.empty()) throw std::logic_error("index script exhausted");
    const size_t v = indices_.front();
    indices_.pop_front();
    if (v >= n) throw std::logic_error("scripted index out of range");
    return v;
  }
  double UniformReal() override {
    if (reals_.empty()) throw std::logic_error("real script exhausted");
    const double v = reals_.front();
    reals_.pop_front();
    return v;
  }
  bool exhausted() const { return indices_.empty() && reals_.empty(); }

 private:
  std::deque<size_t> indices_;
  std::deque<double> reals_;
};

// Plain dynamic-programming edit distance over code points.
inline size_t Levenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

class TempDir {
 public:
  TempDir() {
    static std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("mtrobust_test_" + std::to_string(rd()) + "_" +
             std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

inline std::filesystem::path TestData(const std::string& name) {
  return std::filesystem::path(MTROBUST_TESTDATA_DIR) / name;
}

}  // namespace testing_util
}  // namespace mtrobust

#endif  // MTROBUST_TESTS_TEST_UTIL_H_
