#pragma once

#include "grsrp/geometry.h"

#include <array>
#include <span>
#include <vector>

namespace grsrp {

// Five point pairs for the global-shutter relative pose problem.
struct GsMinimalProblem {
    std::array<NormalizedPoint, 5> points_i;
    std::array<NormalizedPoint, 5> points_j;

    static GsMinimalProblem from(std::span<const Correspondence> corrs);
};

// Five-point essential matrix solver. Returns at most ten candidates with
// unit Frobenius norm satisfying m_j' E m_i = 0 on the five pairs. Throws
// DegenerateInput when the linear constraints are rank deficient.
std::vector<Mat3> gs_five_point(const GsMinimalProblem &problem);

// Picks the factorization E ~ [t]x R with the most points in front of both
// cameras (global-shutter rays). Throws AmbiguousDecomposition when the best
// two factorizations tie, DegenerateInput when no point is in front.
RelativePose decompose_essential(const Mat3 &e, std::span<const Correspondence> corrs);

// The four (R, t) factorizations of an essential matrix.
std::array<RelativePose, 4> essential_factorizations(const Mat3 &e);

} // namespace grsrp
