#pragma once

#include "dse/types.hpp"

// Exact geometric predicates on double coordinates. A floating-point filter
// answers most queries; uncertain ones are recomputed with exact expansion
// arithmetic, so the returned sign is always the sign of the exact determinant.
namespace dse::predicates {

/// Sign of twice the signed area of (a, b, c): +1 counter-clockwise, -1
/// clockwise, 0 collinear.
int orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

/// +1 if d lies strictly inside the circle through the counter-clockwise
/// triangle (a, b, c), -1 if strictly outside, 0 if co-circular.
int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// incircle with co-circular ties resolved by simulation of simplicity: the
/// paraboloid lift of each point is raised by an infinitesimal that is larger
/// for smaller `rank`. Ranks must be distinct. Returns 0 only if all four
/// points are collinear.
int incircle_perturbed(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                       Index rank_a, Index rank_b, Index rank_c, Index rank_d);

/// Exact determinant as a double-precision approximation of the expansion
/// (for diagnostics and tests).
double orient2d_value(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace dse::predicates
