#pragma once

#include <filesystem>
#include <string>

#include "conic/problem.hpp"

namespace conic {

/// Parses the JSON problem format (version "1"). Sparse matrices are given as
/// [row, col, value] triplets; duplicate positions are summed in file order.
/// Throws ParseError for malformed input and ValidationError when the parsed
/// problem violates an invariant.
ProblemData parse_problem(const std::string& text);
ProblemData read_problem(const std::filesystem::path& path);

/// Serializes with shortest round-trip decimal numbers, so that
/// parse_problem(to_json(p)) is bitwise identical to p.
std::string to_json(const ProblemData& problem);
void write_problem(const ProblemData& problem, const std::filesystem::path& path);

}  // namespace conic
