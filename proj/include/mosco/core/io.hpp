/**
 * @file io.hpp
 * @brief File helpers: whole-file reads and atomic (temp + rename) writes.
 */
#pragma once

#include <cstdint>
#include <string>

namespace mosco {

std::string read_text_file(const std::string& path);
/// Writes to "<path>.tmp" then renames over path. Throws Error(IoError).
void write_file_atomic(const std::string& path, const std::string& content);

/// 64-bit FNV-1a, used for config hashes.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace mosco
