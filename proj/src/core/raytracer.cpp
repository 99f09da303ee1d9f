#include "core/raytracer.hpp"

#include <algorithm>
#include <cmath>

namespace chanpred::rt {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Vec3 {
  double x, y, z;
};

Vec3 sub(const LocalPoint& a, const LocalPoint& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

double dist(const LocalPoint& a, const LocalPoint& b) { return norm(sub(a, b)); }

// Finite reflector: a vertical wall quad or the ground rectangle.
struct Face {
  Plane plane;
  double loss_db;
  bool is_ground;
  // wall extent: segment (ax,ay)-(bx,by), z in [z0, z1]
  double ax, ay, bx, by, z0, z1;
  // ground extent
  scene::Bounds bounds;

  bool contains(const LocalPoint& p) const {
    constexpr double tol = 1e-9;
    if (is_ground) {
      return p.x >= bounds.x_min - tol && p.x <= bounds.x_max + tol &&
             p.y >= bounds.y_min - tol && p.y <= bounds.y_max + tol;
    }
    if (p.z < z0 - tol || p.z > z1 + tol) return false;
    const double ex = bx - ax, ey = by - ay;
    const double len2 = ex * ex + ey * ey;
    const double t = ((p.x - ax) * ex + (p.y - ay) * ey) / len2;
    return t >= -tol && t <= 1.0 + tol;
  }
};

double signed_dist(const LocalPoint& p, const Plane& pl) {
  return dot(sub(p, pl.point), {pl.normal.x, pl.normal.y, pl.normal.z});
}

std::vector<Face> collect_faces(const Scene& s) {
  std::vector<Face> faces;
  for (const auto& b : s.buildings) {
    const double loss = s.materials[b.material].reflection_loss_db;
    const size_t n = b.footprint.size();
    for (size_t i = 0; i < n; ++i) {
      const auto& p = b.footprint[i];
      const auto& q = b.footprint[(i + 1) % n];
      Face f{};
      f.loss_db = loss;
      f.is_ground = false;
      f.ax = p.x;
      f.ay = p.y;
      f.bx = q.x;
      f.by = q.y;
      f.z0 = s.terrain_z;
      f.z1 = s.terrain_z + b.height;
      // CCW footprint: outward normal is the right-hand perpendicular
      const double ex = q.x - p.x, ey = q.y - p.y;
      const double len = std::hypot(ex, ey);
      if (len == 0.0) continue;
      f.plane.point = {p.x, p.y, s.terrain_z};
      f.plane.normal = {ey / len, -ex / len, 0.0};
      faces.push_back(f);
    }
  }
  Face g{};
  g.loss_db = s.materials.empty() ? 3.0
                                  : s.materials[s.ground_material].reflection_loss_db;
  g.is_ground = true;
  g.bounds = s.bounds;
  g.plane.point = {0.0, 0.0, s.terrain_z};
  g.plane.normal = {0.0, 0.0, 1.0};
  faces.push_back(g);
  return faces;
}

struct Tracer {
  const Scene& scn;
  const std::vector<Face>& faces;
  const LocalPoint& tx;
  const LocalPoint& rx;
  const TraceConfig& cfg;
  std::vector<PropagationPath>& out;
  std::vector<int> seq;

  void emit(const std::vector<LocalPoint>& bounce_points, double loss_db_total) {
    std::vector<LocalPoint> verts;
    verts.reserve(bounce_points.size() + 2);
    verts.push_back(tx);
    for (const auto& p : bounce_points) verts.push_back(p);
    verts.push_back(rx);
    double d = 0.0;
    for (size_t i = 0; i + 1 < verts.size(); ++i) d += dist(verts[i], verts[i + 1]);
    for (size_t i = 0; i + 1 < verts.size(); ++i)
      if (scene::segment_occluded(scn, verts[i], verts[i + 1])) return;
    const double lambda = kSpeedOfLight / cfg.carrier_frequency_hz;
    const double amp = std::sqrt(cfg.tx_power_w) * lambda / (4.0 * kPi * d) *
                       std::pow(10.0, -loss_db_total / 20.0);
    PropagationPath path;
    path.gain = {amp, 0.0};
    path.delay_s = d / kSpeedOfLight;
    path.order = static_cast<int>(bounce_points.size());
    path.vertices = std::move(verts);
    out.push_back(std::move(path));
  }

  // Unfold the image sequence back from rx; images[j] is tx mirrored across
  // seq[0..j].
  bool back_trace(const std::vector<LocalPoint>& images,
                  std::vector<LocalPoint>& bounce_points) const {
    LocalPoint cur = rx;
    const int k = static_cast<int>(seq.size());
    bounce_points.assign(k, {});
    for (int j = k - 1; j >= 0; --j) {
      const Face& f = faces[seq[j]];
      if (signed_dist(cur, f.plane) <= 0.0) return false;  // behind the face
      const Vec3 dir = sub(images[j], cur);
      const double denom = dot(dir, {f.plane.normal.x, f.plane.normal.y, f.plane.normal.z});
      if (denom >= 0.0) return false;
      const double t = -signed_dist(cur, f.plane) / denom;
      if (!(t > 0.0 && t < 1.0)) return false;
      LocalPoint p{cur.x + t * dir.x, cur.y + t * dir.y, cur.z + t * dir.z};
      if (!f.contains(p)) return false;
      bounce_points[j] = p;
      cur = p;
    }
    return true;
  }

  void search(const LocalPoint& image, double loss_db, int depth) {
    if (depth >= cfg.max_reflection_order) return;
    for (size_t fi = 0; fi < faces.size(); ++fi) {
      if (!seq.empty() && static_cast<int>(fi) == seq.back()) continue;
      const Face& f = faces[fi];
      if (signed_dist(image, f.plane) <= 0.0) continue;
      const LocalPoint next_image = mirror_point(image, f.plane);
      seq.push_back(static_cast<int>(fi));
      images_.push_back(next_image);
      std::vector<LocalPoint> bounce_points;
      if (back_trace(images_, bounce_points))
        emit(bounce_points, loss_db + f.loss_db);
      search(next_image, loss_db + f.loss_db, depth + 1);
      images_.pop_back();
      seq.pop_back();
    }
  }

  std::vector<LocalPoint> images_;
};

}  // namespace

LocalPoint mirror_point(const LocalPoint& p, const Plane& plane) {
  const double d = signed_dist(p, plane);
  return {p.x - 2.0 * d * plane.normal.x, p.y - 2.0 * d * plane.normal.y,
          p.z - 2.0 * d * plane.normal.z};
}

std::vector<PropagationPath> trace_paths(const Scene& s, const LocalPoint& tx,
                                         const LocalPoint& rx, const TraceConfig& cfg) {
  if (tx.x == rx.x && tx.y == rx.y && tx.z == rx.z)
    throw std::invalid_argument("tx and rx coincide");
  std::vector<PropagationPath> out;

  if (!scene::segment_occluded(s, tx, rx)) {
    const double d = dist(tx, rx);
    const double lambda = kSpeedOfLight / cfg.carrier_frequency_hz;
    PropagationPath los;
    los.gain = {std::sqrt(cfg.tx_power_w) * lambda / (4.0 * kPi * d), 0.0};
    los.delay_s = d / kSpeedOfLight;
    los.order = 0;
    los.vertices = {tx, rx};
    out.push_back(std::move(los));
  }

  if (cfg.max_reflection_order > 0) {
    const std::vector<Face> faces = collect_faces(s);
    Tracer tracer{s, faces, tx, rx, cfg, out, {}, {}};
    tracer.search(tx, 0.0, 0);
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const PropagationPath& a, const PropagationPath& b) {
                     return a.delay_s < b.delay_s;
                   });
  return out;
}

}  // namespace chanpred::rt
