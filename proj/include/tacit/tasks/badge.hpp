#pragma once

#include "tacit/core/types.hpp"

// Answer badges for the yes/no tasks: a colored disc carrying a glyph,
// green with a check for YES, red with a cross for NO.
namespace tacit::badge {

inline constexpr int kVariants = 4;

// Variant 0 is the canonical badge; 1..3 change the glyph style and frame
// but keep the answer color dominant.
Scene render(bool yes, int variant = 0);

// Majority of badge-green vs badge-red pixels decides the answer; green
// wins ties. No badge pixels at all -> "no_answer".
VerificationResult verify(const RasterImage& candidate, bool expected);

// Solution badge plus the four opposite-answer variants.
void add_opposite_distractors(PuzzleInstance& inst, bool answer);

}  // namespace tacit::badge
