#pragma once

#include <cmath>

namespace adf {

/// Reference ellipsoid. The only one this toolkit ships is WGS84; the struct
/// exists so constants flow through one place instead of being re-typed.
struct Ellipsoid {
    double semi_major_axis_m;  // a
    double flattening;         // f
    double ecc_sq;             // e^2, first eccentricity squared

    static Ellipsoid wgs84() {
        return Ellipsoid{6378137.0, 1.0 / 298.257223563, 6.69437999014e-3};
    }
};

/// Geodetic position. Angles are radians internally; the file formats carry
/// degrees and convert at the ingestion boundary.
struct GeodeticCoord {
    double lat_rad = 0.0;
    double lon_rad = 0.0;
    double height_m = 0.0;

    /// Builds from degrees, wrapping longitude into (-180, 180].
    static GeodeticCoord from_degrees(double lat_deg, double lon_deg,
                                      double height_m);

    double lat_deg() const { return lat_rad * 57.29577951308232; }
    double lon_deg() const { return lon_rad * 57.29577951308232; }
};

/// Earth-Centered Earth-Fixed Cartesian position in meters.
struct EcefCoord {
    double x_m = 0.0;
    double y_m = 0.0;
    double z_m = 0.0;
};

/// Local tangent-frame offset (east/north/up) in meters.
struct EnuCoord {
    double east_m = 0.0;
    double north_m = 0.0;
    double up_m = 0.0;
};

inline double sq_dist(const EcefCoord& a, const EcefCoord& b) {
    const double dx = a.x_m - b.x_m;
    const double dy = a.y_m - b.y_m;
    const double dz = a.z_m - b.z_m;
    return dx * dx + dy * dy + dz * dz;
}

/// Prime vertical radius of curvature N(phi) = a / sqrt(1 - e^2 sin^2 phi).
double prime_vertical_radius(double lat_rad,
                             const Ellipsoid& ell = Ellipsoid::wgs84());

/// x = (N+h) cos(phi) cos(lam), y = (N+h) cos(phi) sin(lam),
/// z = (N (1-e^2) + h) sin(phi).
EcefCoord geodetic_to_ecef(const GeodeticCoord& g,
                           const Ellipsoid& ell = Ellipsoid::wgs84());

/// Inverse of geodetic_to_ecef by fixed-point iteration on the latitude;
/// converges to double precision in a handful of steps for terrestrial
/// points. Used by the synthetic generator to re-attach geodetic
/// coordinates after flat-frame motion planning.
GeodeticCoord ecef_to_geodetic(const EcefCoord& p,
                               const Ellipsoid& ell = Ellipsoid::wgs84());

// ECEF -> local ENU about `origin`, using the standard geodesy rotation
//   E = -sin(lam) dx + cos(lam) dy
//   N = -sin(phi) cos(lam) dx - sin(phi) sin(lam) dy + cos(phi) dz
//   U =  cos(phi) cos(lam) dx + cos(phi) sin(lam) dy + sin(phi) dz
// which is orthogonal, so it preserves norms.
EnuCoord ecef_to_enu(const EcefCoord& p, const GeodeticCoord& origin,
                     const Ellipsoid& ell = Ellipsoid::wgs84());

/// Inverse of ecef_to_enu (rotation transpose plus origin offset).
EcefCoord enu_to_ecef(const EnuCoord& v, const GeodeticCoord& origin,
                      const Ellipsoid& ell = Ellipsoid::wgs84());

}  // namespace adf
