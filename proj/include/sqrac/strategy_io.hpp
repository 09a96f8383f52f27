#pragma once

// JSON interchange format for strategies:
//
//   {
//     "preparations": [[rx, ry, rz], ...8],
//     "instruments": [{"alpha": a, "t": [tx, ty, tz],
//                      "unitaries": [U0, U1]}, ...3],
//     "measurements": [{"bias": b, "r": [rx, ry, rz]}, ...3]
//   }
//
// A unitary is four row-major complex entries, each written [re, im].
// "unitaries" may be replaced by a single shared "unitary", or omitted
// (identity). Instrument y has K_b = U_b sqrt(B_b) with
// B_0 = ((1 + alpha) I + t.sigma) / 2.

#include <filesystem>
#include <string>
#include <string_view>

#include "sqrac/scenario.hpp"

namespace sqrac {

/// Pretty-printed JSON with round-trip exact doubles.
std::string strategy_to_json(const Strategy& s);

/// Throws ParseError (with the byte offset or JSON pointer of the problem)
/// for malformed documents and DomainError for physically invalid values.
Strategy strategy_from_json(std::string_view text);

/// Reads and parses a strategy file; IoError when the file cannot be read.
Strategy read_strategy_file(const std::filesystem::path& path);

}  // namespace sqrac
