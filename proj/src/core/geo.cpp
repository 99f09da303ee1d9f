#include "core/geo.hpp"

#include <cmath>

namespace chanpred::geo {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDeg2Rad = kPi / 180.0;

// WGS84
constexpr double kA = 6378137.0;
constexpr double kF = 1.0 / 298.257223563;
constexpr double kK0 = 0.9996;
constexpr double kFalseEasting = 500000.0;
constexpr double kFalseNorthingSouth = 10000000.0;
}  // namespace

UtmPoint geodetic_to_utm(const GeodeticPoint& p) {
  if (!(p.lat_deg >= -90.0 && p.lat_deg <= 90.0))
    throw std::domain_error("latitude out of [-90, 90]");
  if (!(p.lon_deg >= -180.0 && p.lon_deg <= 180.0))
    throw std::domain_error("longitude out of [-180, 180]");

  const int zone = static_cast<int>(std::floor((p.lon_deg + 180.0) / 6.0)) % 60 + 1;
  const double lon0 = (zone - 1) * 6.0 - 180.0 + 3.0;

  const double phi = p.lat_deg * kDeg2Rad;
  const double dlam = (p.lon_deg - lon0) * kDeg2Rad;

  // Krüger series via the third flattening n (4th order, sub-mm at UTM scale).
  const double n = kF / (2.0 - kF);
  const double n2 = n * n, n3 = n2 * n, n4 = n3 * n;
  const double a_hat = kA / (1.0 + n) * (1.0 + n2 / 4.0 + n4 / 64.0);

  // Conformal latitude.
  const double e = std::sqrt(kF * (2.0 - kF));
  const double sphi = std::sin(phi);
  const double chi = std::atan(std::sinh(
      std::asinh(std::tan(phi)) - e * std::atanh(e * sphi)));

  const double xi0 = std::atan2(std::tan(chi), std::cos(dlam));
  const double eta0 = std::asinh(std::sin(dlam) /
                                 std::hypot(std::tan(chi), std::cos(dlam)));

  const double alpha[4] = {
      n / 2.0 - 2.0 * n2 / 3.0 + 5.0 * n3 / 16.0 + 41.0 * n4 / 180.0,
      13.0 * n2 / 48.0 - 3.0 * n3 / 5.0 + 557.0 * n4 / 1440.0,
      61.0 * n3 / 240.0 - 103.0 * n4 / 140.0,
      49561.0 * n4 / 161280.0};

  double xi = xi0;
  double eta = eta0;
  for (int j = 1; j <= 4; ++j) {
    xi += alpha[j - 1] * std::sin(2.0 * j * xi0) * std::cosh(2.0 * j * eta0);
    eta += alpha[j - 1] * std::cos(2.0 * j * xi0) * std::sinh(2.0 * j * eta0);
  }

  UtmPoint out;
  out.zone = zone;
  out.hemisphere = p.lat_deg >= 0.0 ? Hemisphere::North : Hemisphere::South;
  out.easting = kFalseEasting + kK0 * a_hat * eta;
  out.northing = kK0 * a_hat * xi;
  if (out.hemisphere == Hemisphere::South) out.northing += kFalseNorthingSouth;
  return out;
}

LocalPoint utm_to_local(const UtmPoint& p, const UtmPoint& origin, double z) {
  if (p.zone != origin.zone || p.hemisphere != origin.hemisphere)
    throw std::domain_error("UTM zone/hemisphere mismatch between point and origin");
  return {p.easting - origin.easting, p.northing - origin.northing, z};
}

UtmPoint local_to_utm(const LocalPoint& p, const UtmPoint& origin) {
  UtmPoint out = origin;
  out.easting = origin.easting + p.x;
  out.northing = origin.northing + p.y;
  return out;
}

}  // namespace chanpred::geo
