#pragma once

// Rational-arithmetic reference predicates used as test oracles.

#include "dse/types.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(double v) { return Rational(v); }

inline int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

// Floating-point evaluation whose sign is trusted only when the magnitude
// clears a generous multiple of the worst-case rounding error (relative to the
// permanent); anything closer is settled in rational arithmetic.
inline constexpr double kFilter = 1e-12;

inline int orient2d(const dse::Vec2& a, const dse::Vec2& b, const dse::Vec2& c) {
  {
    const double l = (b.x() - a.x()) * (c.y() - a.y()), r = (b.y() - a.y()) * (c.x() - a.x());
    const double det = l - r;
    if (std::abs(det) > kFilter * (std::abs(l) + std::abs(r))) return det > 0 ? 1 : -1;
  }
  const Rational abx = rat(b.x()) - rat(a.x()), aby = rat(b.y()) - rat(a.y());
  const Rational acx = rat(c.x()) - rat(a.x()), acy = rat(c.y()) - rat(a.y());
  return sign(abx * acy - aby * acx);
}

inline int incircle(const dse::Vec2& a, const dse::Vec2& b, const dse::Vec2& c, const dse::Vec2& d) {
  {
    const double adx = a.x() - d.x(), ady = a.y() - d.y();
    const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    const double al = adx * adx + ady * ady, bl = bdx * bdx + bdy * bdy, cl = cdx * cdx + cdy * cdy;
    const double det = al * (bdx * cdy - bdy * cdx) + bl * (cdx * ady - cdy * adx) + cl * (adx * bdy - ady * bdx);
    const double permanent = al * (std::abs(bdx * cdy) + std::abs(bdy * cdx)) +
                             bl * (std::abs(cdx * ady) + std::abs(cdy * adx)) +
                             cl * (std::abs(adx * bdy) + std::abs(ady * bdx));
    if (std::abs(det) > kFilter * permanent) return det > 0 ? 1 : -1;
  }
  const Rational adx = rat(a.x()) - rat(d.x()), ady = rat(a.y()) - rat(d.y());
  const Rational bdx = rat(b.x()) - rat(d.x()), bdy = rat(b.y()) - rat(d.y());
  const Rational cdx = rat(c.x()) - rat(d.x()), cdy = rat(c.y()) - rat(d.y());
  const Rational al = adx * adx + ady * ady;
  const Rational bl = bdx * bdx + bdy * bdy;
  const Rational cl = cdx * cdx + cdy * cdy;
  const Rational det = adx * (bdy * cl - bl * cdy) - ady * (bdx * cl - bl * cdx) + al * (bdx * cdy - bdy * cdx);
  return sign(det);
}

}  // namespace oracle
