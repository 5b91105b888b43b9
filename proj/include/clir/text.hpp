// Copyright 2026 The clirbench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

/// Minimal UTF-8 and Unicode helpers. Case mapping covers Latin (incl.
/// Extended-A/B basics), Greek and Cyrillic, which is what the European
/// CLEF languages need; other scripts pass through unchanged.
namespace clir::text {

/// Decodes UTF-8 into code points. Invalid bytes decode to U+FFFD.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

char32_t to_lower(char32_t cp);
bool is_upper(char32_t cp);
bool is_space(char32_t cp);
bool is_punct(char32_t cp);
bool is_digit(char32_t cp);
bool is_letter(char32_t cp);

std::string to_lower(std::string_view s);

/// Splits on ASCII tabs only (file formats use tab separators).
std::vector<std::string_view> split_tab(std::string_view line);

/// Splits on runs of ASCII spaces/tabs.
std::vector<std::string_view> split_fields(std::string_view line);

std::string_view trim(std::string_view s);

}  // namespace clir::text
