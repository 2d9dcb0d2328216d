#include "dse/geodesic.hpp"

#include "dse/normals.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <unordered_map>

namespace dse {
namespace {

Index opposite(const Triangle& t, Index u, Index v) {
  for (Index x : t)
    if (x != u && x != v) return x;
  return -1;
}

// Hinge (u, v) with apexes a and b on either side, unfolded into the plane:
// u at the origin, v on the +x axis, a above and b below.
struct Unfolded {
  Vec2 a, b;
  double edge;
};

Unfolded unfold(const Vec3& u, const Vec3& v, const Vec3& a, const Vec3& b) {
  const Vec3 axis = v - u;
  const double len = axis.norm();
  const Vec3 dir = axis / len;
  auto place = [&](const Vec3& p, double side) {
    const Vec3 rel = p - u;
    const double x = rel.dot(dir);
    const double y = (rel - x * dir).norm();
    return Vec2(x, side * y);
  };
  return {place(a, 1.0), place(b, -1.0), len};
}

double wedge_angle(const Vec3& c, const Vec3& a, const Vec3& b) {
  const Vec3 x = a - c, y = b - c;
  return std::atan2(x.cross(y).norm(), x.dot(y));
}

}  // namespace

ReferenceSurface::ReferenceSurface(TriangleMesh mesh) : mesh_(std::move(mesh)) {
  validate_mesh(mesh_);
  const EdgeAdjacency adj = build_edge_adjacency(mesh_);
  if (adj.max_incidence() > 2) throw Error("ReferenceSurface: mesh is not edge-manifold");
  normals_ = vertex_normals(mesh_);

  std::map<Edge, double> lengths;
  for (const auto& [e, tris] : adj.incidence) {
    lengths[e] = (position(e.first) - position(e.second)).norm();
  }
  for (const auto& [e, tris] : adj.incidence) {
    if (tris.size() != 2) continue;
    const Index a = opposite(mesh_.triangles[tris[0]], e.first, e.second);
    const Index b = opposite(mesh_.triangles[tris[1]], e.first, e.second);
    if (a == b) continue;
    const Unfolded f = unfold(position(e.first), position(e.second), position(a), position(b));
    const double denom = f.a.y() - f.b.y();
    if (!(denom > 0.0)) continue;
    const double t = f.a.y() / denom;
    const double x = f.a.x() + t * (f.b.x() - f.a.x());
    if (!(x > 0.0 && x < f.edge)) continue;
    const double len = (f.a - f.b).norm();
    auto [it, inserted] = lengths.emplace(make_edge(a, b), len);
    if (!inserted) it->second = std::min(it->second, len);
  }
  graph_.assign(static_cast<std::size_t>(size()), {});
  for (const auto& [e, len] : lengths) {
    graph_[e.first].push_back({e.second, len});
    graph_[e.second].push_back({e.first, len});
  }

  // Fans: for each triangle (v, a, b) in winding order, a precedes b around v.
  std::vector<std::map<Index, Index>> next(static_cast<std::size_t>(size()));
  for (const auto& t : mesh_.triangles)
    for (int i = 0; i < 3; ++i) next[t[i]][t[(i + 1) % 3]] = t[(i + 2) % 3];
  fans_.resize(static_cast<std::size_t>(size()));
  for (Index v = 0; v < size(); ++v) {
    const auto& nx = next[v];
    if (nx.empty()) continue;
    std::map<Index, bool> has_pred;
    for (const auto& [a, b] : nx) has_pred[b] = true;
    Index start = nx.begin()->first;
    bool closed = true;
    for (const auto& [a, b] : nx)
      if (!has_pred.count(a)) {
        start = a;
        closed = false;
        break;
      }
    Fan& fan = fans_[v];
    fan.closed = closed;
    Index cur = start;
    for (std::size_t guard = 0; guard <= nx.size(); ++guard) {
      fan.ring.push_back(cur);
      auto it = nx.find(cur);
      if (it == nx.end()) break;
      cur = it->second;
      if (cur == start) break;
    }
  }
}

GeodesicDistances graph_geodesic_distances(const ReferenceSurface& surface, Index source, double cutoff,
                                           std::size_t max_settled) {
  if (source < 0 || source >= surface.size()) throw Error("graph_geodesic_distances: source out of range");
  GeodesicDistances out;
  std::unordered_map<Index, double> best;
  std::unordered_map<Index, Index> parent;
  std::unordered_map<Index, bool> settled;
  using Item = std::pair<double, Index>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  best[source] = 0.0;
  parent[source] = -1;
  heap.push({0.0, source});
  while (!heap.empty() && out.ids.size() < max_settled) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (settled[v] || d > best[v]) continue;
    if (d > cutoff) break;
    settled[v] = true;
    out.ids.push_back(v);
    out.distances.push_back(d);
    out.parents.push_back(parent[v]);
    for (const auto& arc : surface.arcs(v)) {
      const double nd = d + arc.length;
      auto it = best.find(arc.to);
      if (it == best.end() || nd < it->second) {
        best[arc.to] = nd;
        parent[arc.to] = v;
        heap.push({nd, arc.to});
      }
    }
  }
  // Queue drained without hitting a limit: the component is exhausted.
  out.exhausted = heap.empty() && out.ids.size() < max_settled;
  if (out.exhausted) {
    bool any_open = false;
    for (Index v : out.ids)
      for (const auto& arc : surface.arcs(v))
        if (!settled[arc.to]) any_open = true;
    out.exhausted = !any_open;
  }
  return out;
}

GroundTruthLogMap logmap_field(const ReferenceSurface& surface, Index center, double cutoff, std::size_t max_settled) {
  const GeodesicDistances g = graph_geodesic_distances(surface, center, cutoff, max_settled);
  GroundTruthLogMap out;
  out.center = center;
  const Vec3& c = surface.position(center);
  const Vec3& nc = surface.normal(center);
  const auto& fan = surface.fan(center);

  // Center frame: e1 along the first fan spoke.
  Vec3 e1c = fan.ring.empty() ? tangent_basis<double>(nc).first : Vec3(surface.position(fan.ring.front()) - c);
  e1c = (e1c - e1c.dot(nc) * nc).normalized();
  const Vec3 e2c = nc.cross(e1c);

  // Polar angles of the center's graph neighbours.
  std::unordered_map<Index, double> polar;
  double total = 0.0;
  const std::size_t wedges = fan.closed ? fan.ring.size() : (fan.ring.empty() ? 0 : fan.ring.size() - 1);
  for (std::size_t i = 0; i < wedges; ++i) {
    const Index a = fan.ring[i];
    const Index b = fan.ring[(i + 1) % fan.ring.size()];
    polar.emplace(a, total);
    const double wedge = wedge_angle(c, surface.position(a), surface.position(b));
    // Apex across (a, b) opposite the center, if any.
    const auto& fb = surface.fan(a);
    Index apex = -1;
    for (std::size_t j = 0; j < fb.ring.size(); ++j) {
      // Around a, the ring goes ... b, x ... when x is opposite the center.
      if (fb.ring[j] == b && (fb.closed || j + 1 < fb.ring.size())) {
        const Index x = fb.ring[(j + 1) % fb.ring.size()];
        if (x != center) apex = x;
      }
    }
    if (apex >= 0) {
      const Unfolded f = unfold(surface.position(a), surface.position(b), c, surface.position(apex));
      // In the hinge frame the center sits at f.a; measure the apex angle from a.
      const Vec2 to_a = -f.a;
      const Vec2 to_apex = f.b - f.a;
      const double ang = std::atan2(std::abs(to_a.x() * to_apex.y() - to_a.y() * to_apex.x()), to_a.dot(to_apex));
      if (ang < wedge) polar.emplace(apex, total + ang);
    }
    total += wedge;
  }
  if (!fan.closed && !fan.ring.empty()) polar.emplace(fan.ring.back(), total);
  const double scale = (fan.closed && total > 0.0) ? 2.0 * std::numbers::pi / total : 1.0;

  struct Frame {
    Vec3 e1, e2;
  };
  std::unordered_map<Index, std::size_t> slot;
  std::vector<Vec2> coords(g.ids.size(), Vec2::Zero());
  std::vector<Frame> frames(g.ids.size());
  auto transport = [&](const Frame& f, const Vec3& from, const Vec3& to) {
    const Eigen::Quaterniond q = Eigen::Quaterniond::FromTwoVectors(from, to);
    Vec3 e1 = q * f.e1;
    e1 = (e1 - e1.dot(to) * to).normalized();
    return Frame{e1, to.cross(e1)};
  };

  for (std::size_t s = 0; s < g.ids.size(); ++s) {
    const Index q = g.ids[s];
    slot[q] = s;
    const Vec3& nq = surface.normal(q);
    if (s == 0) {
      frames[0] = {e1c, e2c};
      continue;
    }
    const Index p = g.parents[s];
    const std::size_t ps = slot.at(p);
    const double step = g.distances[s] - g.distances[ps];
    const Vec3 d3 = surface.position(q) - surface.position(p);
    if (p == center) {
      const double psi = std::atan2(e2c.dot(d3), e1c.dot(d3));
      auto it = polar.find(q);
      const double phi = it == polar.end() ? psi : scale * it->second;
      coords[s] = step * Vec2(std::cos(phi), std::sin(phi));
      Frame f = transport(frames[0], nc, nq);
      const double delta = phi - psi;
      const Vec3 e1 = std::cos(delta) * f.e1 + std::sin(delta) * f.e2;
      frames[s] = {e1, nq.cross(e1)};
    } else {
      const Frame& fp = frames[ps];
      const Vec2 t(fp.e1.dot(d3), fp.e2.dot(d3));
      const double len = t.norm();
      coords[s] = coords[ps] + (len > 0.0 ? Vec2(t * (step / len)) : Vec2(Vec2::Zero()));
      frames[s] = transport(fp, surface.normal(p), nq);
    }
  }

  for (std::size_t s = 1; s < g.ids.size(); ++s) {
    out.ids.push_back(g.ids[s]);
    out.distances.push_back(g.distances[s]);
    out.coords.push_back(coords[s]);
  }
  return out;
}

GroundTruthLogMap gt_logmap(const ReferenceSurface& surface, Index center, int k) {
  if (k < 1) throw Error("gt_logmap: k must be positive");
  GroundTruthLogMap out = logmap_field(surface, center, std::numeric_limits<double>::infinity(), static_cast<std::size_t>(k) + 1);
  if (out.ids.size() < static_cast<std::size_t>(k)) throw Error("gt_logmap: fewer than k vertices reachable");
  return out;
}

AnalyticSurface AnalyticSurface::plane(const Vec3& point, const Vec3& normal) {
  return {Kind::plane, point, normal.normalized(), 0.0};
}

AnalyticSurface AnalyticSurface::sphere(const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw Error("sphere: radius must be positive");
  return {Kind::sphere, center, Vec3::UnitZ(), radius};
}

AnalyticSurface AnalyticSurface::cylinder(double radius, const Vec3& axis_point) {
  if (!(radius > 0.0)) throw Error("cylinder: radius must be positive");
  return {Kind::cylinder, axis_point, Vec3::UnitZ(), radius};
}

Vec3 AnalyticSurface::normal_at(const Vec3& p) const {
  switch (kind) {
    case Kind::plane: return axis;
    case Kind::sphere: return (p - origin).normalized();
    case Kind::cylinder: {
      Vec3 r = p - origin;
      r.z() = 0.0;
      return r.normalized();
    }
  }
  return axis;
}

bool AnalyticSurface::contains(const Vec3& p, double tolerance) const {
  switch (kind) {
    case Kind::plane: return std::abs((p - origin).dot(axis)) <= tolerance;
    case Kind::sphere: return std::abs((p - origin).norm() - radius) <= tolerance * std::max(1.0, radius);
    case Kind::cylinder: {
      const Vec3 r = p - origin;
      return std::abs(std::hypot(r.x(), r.y()) - radius) <= tolerance * std::max(1.0, radius);
    }
  }
  return false;
}

Vec2 analytic_logmap(const AnalyticSurface& shape, const Vec3& center, const Vec3& neighbor) {
  if (!shape.contains(center) || !shape.contains(neighbor)) throw Error("analytic_logmap: point off the surface");
  switch (shape.kind) {
    case AnalyticSurface::Kind::plane: {
      const auto [e1, e2] = tangent_basis<double>(shape.axis);
      const Vec3 d = neighbor - center;
      return {d.dot(e1), d.dot(e2)};
    }
    case AnalyticSurface::Kind::sphere: {
      const Vec3 n = (center - shape.origin).normalized();
      const Vec3 m = (neighbor - shape.origin).normalized();
      const double cosang = std::clamp(n.dot(m), -1.0, 1.0);
      const Vec3 tangent = m - cosang * n;
      const double tlen = tangent.norm();
      if (tlen < 1e-12) {
        if (cosang > 0.0) return Vec2::Zero();
        throw Error("analytic_logmap: antipodal point is on the cut locus");
      }
      const double dist = shape.radius * std::atan2(tlen, cosang);
      const auto [e1, e2] = tangent_basis<double>(n);
      const Vec3 dir = tangent / tlen;
      return dist * Vec2(dir.dot(e1), dir.dot(e2));
    }
    case AnalyticSurface::Kind::cylinder: {
      const Vec3 a = center - shape.origin, b = neighbor - shape.origin;
      double dphi = std::atan2(b.y(), b.x()) - std::atan2(a.y(), a.x());
      while (dphi > std::numbers::pi) dphi -= 2.0 * std::numbers::pi;
      while (dphi <= -std::numbers::pi) dphi += 2.0 * std::numbers::pi;
      if (std::abs(std::abs(dphi) - std::numbers::pi) < 1e-12) throw Error("analytic_logmap: point on the cut locus");
      return {shape.radius * dphi, b.z() - a.z()};
    }
  }
  return Vec2::Zero();
}

}  // namespace dse
