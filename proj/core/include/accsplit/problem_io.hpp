#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "accsplit/problems.hpp"

namespace accsplit {

/// JSON encoding of a composite problem:
///
///   {"schema": 1, "n": n,
///    "f": {"kind": "quadratic", "Q": [row-major n*n], "q": [n], "m": m, "L": L}
///       | {"kind": "logistic_ridge", "rows": s, "A": [row-major s*n],
///          "y": [s], "ridge": r},
///    "g": {"kind": "l1", "lambda": l}
///       | {"kind": "box", "lower": [n], "upper": [n]}}
///
/// "m"/"L" are optional on input for quadratics (recomputed from Q when
/// absent). Doubles are written in shortest round-trip form, so
/// encode(decode(encode(p))) == encode(p) byte for byte. Generic oracles
/// cannot be serialized.
[[nodiscard]] std::string problem_to_json(const CompositeProblem& problem);
[[nodiscard]] CompositeProblem problem_from_json(std::string_view text);

void save_problem(const CompositeProblem& problem, const std::filesystem::path& path);
[[nodiscard]] CompositeProblem load_problem(const std::filesystem::path& path);

}  // namespace accsplit
