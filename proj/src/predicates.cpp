#include "dse/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace dse::predicates {
namespace {

// Nonoverlapping floating-point expansions, least significant component
// first, zero components eliminated.
using Expansion = std::vector<double>;

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

inline void two_sum(double a, double b, double& x, double& y) {
  x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  y = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& x, double& y) {
  x = a * b;
  y = std::fma(a, b, -x);
}

Expansion from_difference(double a, double b) {
  double x, y;
  two_sum(a, -b, x, y);
  Expansion e;
  if (y != 0.0) e.push_back(y);
  if (x != 0.0) e.push_back(x);
  return e;
}

Expansion grow(const Expansion& e, double b) {
  Expansion h;
  h.reserve(e.size() + 1);
  double q = b;
  for (double ei : e) {
    double sum, err;
    two_sum(q, ei, sum, err);
    if (err != 0.0) h.push_back(err);
    q = sum;
  }
  if (q != 0.0) h.push_back(q);
  return h;
}

Expansion add(const Expansion& e, const Expansion& f) {
  Expansion h = e;
  for (double fi : f) h = grow(h, fi);
  return h;
}

Expansion negate(Expansion e) {
  for (double& x : e) x = -x;
  return e;
}

Expansion scale(const Expansion& e, double b) {
  Expansion h;
  if (e.empty() || b == 0.0) return h;
  h.reserve(2 * e.size());
  double q, hh;
  two_product(e[0], b, q, hh);
  if (hh != 0.0) h.push_back(hh);
  for (std::size_t i = 1; i < e.size(); ++i) {
    double p1, p0;
    two_product(e[i], b, p1, p0);
    double sum, err;
    two_sum(q, p0, sum, err);
    if (err != 0.0) h.push_back(err);
    two_sum(p1, sum, q, err);
    if (err != 0.0) h.push_back(err);
  }
  if (q != 0.0) h.push_back(q);
  return h;
}

Expansion multiply(const Expansion& e, const Expansion& f) {
  Expansion h;
  for (double fi : f) h = add(h, scale(e, fi));
  return h;
}

int sign_of(const Expansion& e) {
  if (e.empty()) return 0;
  return e.back() > 0.0 ? 1 : (e.back() < 0.0 ? -1 : 0);
}

inline int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

Expansion orient_exact(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Expansion acx = from_difference(a.x(), c.x());
  const Expansion acy = from_difference(a.y(), c.y());
  const Expansion bcx = from_difference(b.x(), c.x());
  const Expansion bcy = from_difference(b.y(), c.y());
  return add(multiply(acx, bcy), negate(multiply(acy, bcx)));
}

int incircle_exact(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const Expansion adx = from_difference(a.x(), d.x()), ady = from_difference(a.y(), d.y());
  const Expansion bdx = from_difference(b.x(), d.x()), bdy = from_difference(b.y(), d.y());
  const Expansion cdx = from_difference(c.x(), d.x()), cdy = from_difference(c.y(), d.y());
  const Expansion alift = add(multiply(adx, adx), multiply(ady, ady));
  const Expansion blift = add(multiply(bdx, bdx), multiply(bdy, bdy));
  const Expansion clift = add(multiply(cdx, cdx), multiply(cdy, cdy));
  const Expansion bc = add(multiply(bdx, cdy), negate(multiply(cdx, bdy)));
  const Expansion ca = add(multiply(cdx, ady), negate(multiply(adx, cdy)));
  const Expansion ab = add(multiply(adx, bdy), negate(multiply(bdx, ady)));
  return sign_of(add(add(multiply(alift, bc), multiply(blift, ca)), multiply(clift, ab)));
}

}  // namespace

int orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double left = (a.x() - c.x()) * (b.y() - c.y());
  const double right = (a.y() - c.y()) * (b.x() - c.x());
  const double det = left - right;
  const double bound = kOrientBound * (std::abs(left) + std::abs(right));
  if (det > bound || -det > bound) return sign_of(det);
  return sign_of(orient_exact(a, b, c));
}

double orient2d_value(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Expansion e = orient_exact(a, b, c);
  double sum = 0.0;
  for (double x : e) sum += x;
  return sum;
}

int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
  const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift + (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                           (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  const double bound = kIncircleBound * permanent;
  if (det > bound || -det > bound) return sign_of(det);
  return incircle_exact(a, b, c, d);
}

int incircle_perturbed(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d,
                       Index rank_a, Index rank_b, Index rank_c, Index rank_d) {
  const int exact = incircle(a, b, c, d);
  if (exact != 0) return exact;
  // d(det)/d(lift_p) is the signed cofactor of p's row: +orient(b,c,d),
  // -orient(a,c,d), +orient(a,b,d), -orient(a,b,c).
  struct Term {
    Index rank;
    int slot;
  };
  std::array<Term, 4> order{{{rank_a, 0}, {rank_b, 1}, {rank_c, 2}, {rank_d, 3}}};
  std::sort(order.begin(), order.end(), [](const Term& x, const Term& y) { return x.rank < y.rank; });
  for (const Term& t : order) {
    int s = 0;
    switch (t.slot) {
      case 0: s = orient2d(b, c, d); break;
      case 1: s = -orient2d(a, c, d); break;
      case 2: s = orient2d(a, b, d); break;
      default: s = -orient2d(a, b, c); break;
    }
    if (s != 0) return s;
  }
  return 0;
}

}  // namespace dse::predicates
