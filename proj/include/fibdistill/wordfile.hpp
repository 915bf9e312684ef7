#pragma once

#include <filesystem>
#include <string>

#include "fibdistill/braid.hpp"

namespace fibdistill {

// Braid word file format:
//   strands <N>
//   s<i>        positive crossing of strands i, i+1
//   S<i>        negative crossing
// One crossing per line, no other content.

std::string format_word(const BraidWord& word);
BraidWord parse_word(const std::string& text, const std::string& originName);

BraidWord read_word_file(const std::filesystem::path& path);
void write_word_file(const std::filesystem::path& path, const BraidWord& word);

// Writes content to a temporary sibling file and renames it into place, so
// readers never observe a partial file.
void atomic_write_file(const std::filesystem::path& path,
                       const std::string& content);

}  // namespace fibdistill
