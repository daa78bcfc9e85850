#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "robba/scheme.hpp"

namespace robba {

/// p / abs_prec given on the command line; they override the file's values.
struct PrecisionOverride {
  std::optional<int> prime;
  std::optional<int> abs_prec;
};

struct ConnectionFile {
  FramedNablaModule module;
  std::string var;
  std::optional<int> trunc;
};

struct FamilyFile {
  FramedFamily family;
};

// Connection file:
//   {"signature": [1, 1], "ring": "formal", "trunc": 8,
//    "connection": [["0", "1 + O(t^8)"], ["0", "0"]]}
// p and abs_prec are required for p-adic rings. "0" entries take the window
// given by "trunc", or the smallest window among the other entries.
// Family files use two-variable entries, either "0" or {"du": ..., "dx": ...},
// plus optional "base_var" and "fiber_var" (default "x"); "trunc" is then a
// pair [trunc_u, trunc_x] or one number for both.
ConnectionFile parse_connection_file(std::string_view json_text, const PrecisionOverride& over = {});
FamilyFile parse_family_file(std::string_view json_text, const PrecisionOverride& over = {});

std::string write_connection_file(const FramedNablaModule& module, std::string_view var);
std::string write_family_file(const FramedFamily& family);

std::string read_text_file(const std::string& path);

}  // namespace robba
