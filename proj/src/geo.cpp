#include "adf/geo.hpp"

#include <cmath>

#include "adf/errors.hpp"

namespace adf {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
}  // namespace

GeodeticCoord GeodeticCoord::from_degrees(double lat_deg, double lon_deg,
                                          double height_m) {
    if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg) ||
        !std::isfinite(height_m)) {
        throw NonFiniteInput("geodetic coordinate is not finite");
    }
    if (lat_deg < -90.0 || lat_deg > 90.0) {
        throw DataError("latitude outside [-90, 90] degrees");
    }
    double lon = std::fmod(lon_deg * kDegToRad + kPi, 2.0 * kPi);
    if (lon <= 0.0) lon += 2.0 * kPi;
    return GeodeticCoord{lat_deg * kDegToRad, lon - kPi, height_m};
}

double prime_vertical_radius(double lat_rad, const Ellipsoid& ell) {
    const double s = std::sin(lat_rad);
    return ell.semi_major_axis_m / std::sqrt(1.0 - ell.ecc_sq * s * s);
}

EcefCoord geodetic_to_ecef(const GeodeticCoord& g, const Ellipsoid& ell) {
    const double n = prime_vertical_radius(g.lat_rad, ell);
    const double cos_lat = std::cos(g.lat_rad);
    const double sin_lat = std::sin(g.lat_rad);
    const double cos_lon = std::cos(g.lon_rad);
    const double sin_lon = std::sin(g.lon_rad);
    return EcefCoord{
        (n + g.height_m) * cos_lat * cos_lon,
        (n + g.height_m) * cos_lat * sin_lon,
        (n * (1.0 - ell.ecc_sq) + g.height_m) * sin_lat,
    };
}

GeodeticCoord ecef_to_geodetic(const EcefCoord& p, const Ellipsoid& ell) {
    if (!std::isfinite(p.x_m) || !std::isfinite(p.y_m) || !std::isfinite(p.z_m)) {
        throw NonFiniteInput("Cartesian coordinate is not finite");
    }
    const double a = ell.semi_major_axis_m;
    const double e2 = ell.ecc_sq;
    const double rho = std::hypot(p.x_m, p.y_m);
    if (rho < 1e-9) {
        // On the polar axis the longitude is arbitrary; pin it to zero.
        const double b = a * (1.0 - ell.flattening);
        const double lat = p.z_m >= 0.0 ? kPi / 2.0 : -kPi / 2.0;
        return GeodeticCoord{lat, 0.0, std::abs(p.z_m) - b};
    }
    double lat = std::atan2(p.z_m, rho * (1.0 - e2));
    double h = 0.0;
    for (int iter = 0; iter < 16; ++iter) {
        const double s = std::sin(lat);
        const double n = a / std::sqrt(1.0 - e2 * s * s);
        // Two height forms: the cosine one degenerates near the poles, the
        // sine one near the equator; pick whichever is well conditioned.
        h = rho > std::abs(p.z_m) ? rho / std::cos(lat) - n
                                  : p.z_m / s - n * (1.0 - e2);
        const double next = std::atan2(p.z_m, rho * (1.0 - e2 * n / (n + h)));
        const bool done = std::abs(next - lat) < 1e-15;
        lat = next;
        if (done) break;
    }
    return GeodeticCoord{lat, std::atan2(p.y_m, p.x_m), h};
}

EnuCoord ecef_to_enu(const EcefCoord& p, const GeodeticCoord& origin,
                     const Ellipsoid& ell) {
    const EcefCoord o = geodetic_to_ecef(origin, ell);
    const double dx = p.x_m - o.x_m;
    const double dy = p.y_m - o.y_m;
    const double dz = p.z_m - o.z_m;
    const double sin_lat = std::sin(origin.lat_rad);
    const double cos_lat = std::cos(origin.lat_rad);
    const double sin_lon = std::sin(origin.lon_rad);
    const double cos_lon = std::cos(origin.lon_rad);
    return EnuCoord{
        -sin_lon * dx + cos_lon * dy,
        -sin_lat * cos_lon * dx - sin_lat * sin_lon * dy + cos_lat * dz,
        cos_lat * cos_lon * dx + cos_lat * sin_lon * dy + sin_lat * dz,
    };
}

EcefCoord enu_to_ecef(const EnuCoord& v, const GeodeticCoord& origin,
                      const Ellipsoid& ell) {
    const EcefCoord o = geodetic_to_ecef(origin, ell);
    const double sin_lat = std::sin(origin.lat_rad);
    const double cos_lat = std::cos(origin.lat_rad);
    const double sin_lon = std::sin(origin.lon_rad);
    const double cos_lon = std::cos(origin.lon_rad);
    const double dx = -sin_lon * v.east_m - sin_lat * cos_lon * v.north_m +
                      cos_lat * cos_lon * v.up_m;
    const double dy = cos_lon * v.east_m - sin_lat * sin_lon * v.north_m +
                      cos_lat * sin_lon * v.up_m;
    const double dz = cos_lat * v.north_m + sin_lat * v.up_m;
    return EcefCoord{o.x_m + dx, o.y_m + dy, o.z_m + dz};
}

}  // namespace adf
