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

#include "mtrobust/corpus_io.h"

#include <string>

#include "gtest/gtest.h"
#include "mtrobust/error.h"
#include "test_util.h"

namespace mtrobust {
namespace {

using testing_util::ReadFile;
using testing_util::TempDir;
using testing_util::WriteFile;

TEST(CorpusIoTest, LoadStripsAndKeepsEmptyLines) {
  TempDir dir;
  WriteFile(dir / "a.txt", "  hello world \n\nlast\r\n");
  const SentenceList list = LoadLines(dir / "a.txt");
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0], "hello world");
  EXPECT_EQ(list[1], "");
  EXPECT_EQ(list[2], "last");
  EXPECT_EQ(list.source_path, (dir / "a.txt").string());
}

TEST(CorpusIoTest, LoadWithoutTrailingNewline) {
  TempDir dir;
  WriteFile(dir / "a.txt", "one\ntwo");
  EXPECT_EQ(LoadLines(dir / "a.txt").lines,
            (std::vector<std::string>{"one", "two"}));
  WriteFile(dir / "empty.txt", "");
  EXPECT_TRUE(LoadLines(dir / "empty.txt").empty());
}

TEST(CorpusIoTest, InvalidUtf8ReportsOffset) {
  TempDir dir;
  WriteFile(dir / "bad.txt", "ok\nab\xff\n");
  try {
    LoadLines(dir / "bad.txt");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("5"), std::string::npos) << e.what();
  }
  EXPECT_THROW(LoadLines(dir / "missing.txt"), DataError);
}

TEST(CorpusIoTest, WriteRoundTrip) {
  TempDir dir;
  const SentenceList list({"a b", "", "猫が好き"});
  WriteLines(dir / "out.txt", list);
  EXPECT_EQ(ReadFile(dir / "out.txt"), "a b\n\n猫が好き\n");
  EXPECT_EQ(LoadLines(dir / "out.txt"), list);
  EXPECT_THROW(WriteLines(dir / "x.txt", SentenceList({"a\nb"})), DataError);
}

TEST(CorpusIoTest, AlignChecksLengths) {
  EXPECT_THROW(Align(SentenceList({"a"}), SentenceList({"a", "b"})),
               DataError);
  EXPECT_THROW(Align(SentenceList(), SentenceList()), DataError);
  ParallelCorpus corpus = Align(SentenceList({"a"}), SentenceList({"b"}));
  EXPECT_EQ(corpus.size(), 1u);
  EXPECT_THROW(corpus.SetHypotheses(SentenceList({"x"}), SentenceList()),
               DataError);
  EXPECT_THROW(corpus.SetPerturbedSource(SentenceList({"x", "y"})),
               DataError);
  corpus.SetHypotheses(SentenceList({"x"}), SentenceList({"y"}));
  EXPECT_NO_THROW(corpus.Validate());
}

}  // namespace
}  // namespace mtrobust
