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

#ifndef MTROBUST_UTF8_H_
#define MTROBUST_UTF8_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mtrobust::utf8 {

// Byte offset of the first ill-formed sequence, or nullopt if `text` is
// well-formed UTF-8. Overlong forms and surrogates count as ill-formed.
std::optional<size_t> FindInvalid(std::string_view text);

// Decodes `text`; ill-formed bytes become U+FFFD.
std::u32string Decode(std::string_view text);
std::string Encode(std::u32string_view text);
std::string Encode(char32_t c);

// Matches Python's str.isspace(), which is what the reference BLEU
// tokenizer splits on.
bool IsSpace(char32_t c);

// Splits on runs of IsSpace() characters; no empty tokens.
std::vector<std::string> SplitWhitespace(std::string_view text);

// Byte ranges [begin, end) of each whitespace-delimited token.
struct Span {
  size_t begin;
  size_t end;
};
std::vector<Span> WhitespaceTokenSpans(std::string_view text);

std::string_view Strip(std::string_view text);

// Full Unicode lowercasing (may change length, e.g. U+0130).
std::string ToLower(std::string_view text);

// Simple one-to-one case mappings.
char32_t ToUpper(char32_t c);
char32_t ToLower(char32_t c);
bool IsUpper(char32_t c);
bool IsLower(char32_t c);

}  // namespace mtrobust::utf8

#endif  // MTROBUST_UTF8_H_
