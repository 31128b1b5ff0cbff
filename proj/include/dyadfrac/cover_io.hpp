#pragma once

// Text and binary serialization of covers and rule sets, plus atomic file output.

#include "dyadfrac/dyadic.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace dyadfrac {

/// `depth n span m exact|outer` header, then one decimal index per line.
std::string write_cover_text(const CellCover& c);
/// Accepts the header with or without the exactness token (default exact); '#' lines are comments.
CellCover read_cover_text(std::string_view text);

/// 16-byte header (magic "DYCE"/"DYCO" for exact/outer, then little-endian u32 depth, span, count)
/// followed by little-endian u64 indices.
std::string write_cover_binary(const CellCover& c);
CellCover read_cover_binary(std::string_view bytes);

/// Rule files: blocks separated by a line `or`; each block has an optional `cutoff N` line
/// (default unbounded) and any number of `forced A B`, `forced A inf` or `free A B` lines.
/// A block using `free` lines needs a finite cutoff and forces every other position up to it.
RuleUnion parse_rule_union(std::string_view text);
std::string format_rule_union(const RuleUnion& u);

std::string read_file(const std::filesystem::path& p);
/// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& p, std::string_view content);

}  // namespace dyadfrac
