#pragma once

#include <stdexcept>

namespace chanpred::geo {

struct GeodeticPoint {
  double lat_deg = 0.0;  // WGS84
  double lon_deg = 0.0;
};

enum class Hemisphere { North, South };

struct UtmPoint {
  double easting = 0.0;   // m
  double northing = 0.0;  // m
  int zone = 0;           // 1..60
  Hemisphere hemisphere = Hemisphere::North;
};

struct LocalPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// WGS84 transverse Mercator (Krüger series), scale factor 0.9996, zone
// central meridian. Throws std::domain_error on out-of-range input.
UtmPoint geodetic_to_utm(const GeodeticPoint& p);

// Translation into the scene frame; origin is typically the SW corner of the
// receiver region. Throws on zone/hemisphere mismatch.
LocalPoint utm_to_local(const UtmPoint& p, const UtmPoint& origin, double z = 0.0);
UtmPoint local_to_utm(const LocalPoint& p, const UtmPoint& origin);

}  // namespace chanpred::geo
