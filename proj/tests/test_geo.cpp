#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <adf/errors.hpp>
#include <adf/geo.hpp>

#include <cmath>

using namespace adf;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Ellipsoid constants recomputed independently (50-digit arithmetic) and
// frozen here; the library must land on the same doubles.
constexpr double kA = 6378137.0;
constexpr double kB = 6356752.314245179;           // a * (1 - f)
constexpr double kNPole = 6399593.625758489;       // N(pi/2)
constexpr double kN45 = 6388838.290121146;         // N(pi/4)
constexpr double kZPole = 6356752.314245184;       // N(pi/2) * (1 - e^2)

double ecef_norm(const EcefCoord& p) {
    return std::sqrt(p.x_m * p.x_m + p.y_m * p.y_m + p.z_m * p.z_m);
}

double enu_norm(const EnuCoord& v) {
    return std::sqrt(v.east_m * v.east_m + v.north_m * v.north_m +
                     v.up_m * v.up_m);
}

double ecef_dist(const EcefCoord& a, const EcefCoord& b) {
    return std::sqrt(sq_dist(a, b));
}

}  // namespace

TEST_CASE("prime vertical radius at reference latitudes") {
    CHECK(prime_vertical_radius(0.0) == kA);  // N(0) = a exactly
    CHECK(prime_vertical_radius(kPi / 2.0) == doctest::Approx(kNPole).epsilon(1e-12));
    CHECK(prime_vertical_radius(kPi / 4.0) == doctest::Approx(kN45).epsilon(1e-12));
}

TEST_CASE("geodetic to ECEF at the equator / prime meridian") {
    const EcefCoord p = geodetic_to_ecef(GeodeticCoord::from_degrees(0, 0, 0));
    CHECK(p.x_m == kA);
    CHECK(p.y_m == 0.0);
    CHECK(p.z_m == 0.0);
}

TEST_CASE("geodetic to ECEF at the north pole") {
    const EcefCoord p = geodetic_to_ecef(GeodeticCoord::from_degrees(90, 0, 0));
    CHECK(std::abs(p.x_m) < 1e-6);  // cos(pi/2) rounds to ~6e-17, not 0
    CHECK(std::abs(p.y_m) < 1e-6);
    CHECK(p.z_m == doctest::Approx(kZPole).epsilon(1e-12));
    // The polar z is N(1-e^2), not the semi-minor axis: e^2 is a frozen
    // constant, not exactly 2f - f^2, so the two differ in the last ulps.
    CHECK(std::abs(p.z_m - kB) < 1e-7);
}

TEST_CASE("geodetic to ECEF at 90 degrees east") {
    const EcefCoord p = geodetic_to_ecef(GeodeticCoord::from_degrees(0, 90, 0));
    CHECK(std::abs(p.x_m) < 1e-6);
    CHECK(p.y_m == doctest::Approx(kA).epsilon(1e-12));
    CHECK(p.z_m == 0.0);  // sin(0) is exactly zero
}

TEST_CASE("height moves radially") {
    const EcefCoord p =
        geodetic_to_ecef(GeodeticCoord::from_degrees(0, 0, 1000));
    CHECK(p.x_m == kA + 1000.0);
}

TEST_CASE("ENU of the origin is zero") {
    const GeodeticCoord origin = GeodeticCoord::from_degrees(38.5, -98.2, 1200);
    const EnuCoord v = ecef_to_enu(geodetic_to_ecef(origin), origin);
    CHECK(v.east_m == 0.0);
    CHECK(v.north_m == 0.0);
    CHECK(v.up_m == 0.0);
}

TEST_CASE("ENU axes at the equator / prime meridian") {
    // At (0, 0) the ENU basis lines up with ECEF: east = +y, north = +z,
    // up = +x.
    const GeodeticCoord origin = GeodeticCoord::from_degrees(0, 0, 0);
    const EnuCoord v = ecef_to_enu(EcefCoord{kA + 7.0, 500.0, 300.0}, origin);
    CHECK(v.east_m == 500.0);
    CHECK(v.north_m == 300.0);
    CHECK(v.up_m == 7.0);
}

TEST_CASE("ENU rotation preserves norms") {
    const GeodeticCoord origin = GeodeticCoord::from_degrees(39.0, -98.0, 800);
    const EcefCoord o = geodetic_to_ecef(origin);
    const double offsets[][3] = {
        {100.0, 0.0, 0.0},       {0.0, -2500.0, 0.0},  {0.0, 0.0, 9000.0},
        {123.4, -567.8, 910.1},  {-5e4, 3e4, -1e4},    {1.0, 1.0, 1.0},
    };
    for (const auto& d : offsets) {
        const EcefCoord p{o.x_m + d[0], o.y_m + d[1], o.z_m + d[2]};
        const double want = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
        const double got = enu_norm(ecef_to_enu(p, origin));
        CHECK(std::abs(got - want) <= 1e-9 * want);
    }
}

TEST_CASE("ENU round trip is the identity") {
    const GeodeticCoord origin = GeodeticCoord::from_degrees(-33.9, 151.2, 30);
    const EnuCoord v{1234.5, -987.6, 55.5};
    const EnuCoord back = ecef_to_enu(enu_to_ecef(v, origin), origin);
    // Absolute floor ~1.5e-9: the intermediate ECEF coordinate is ~6.4e6 m,
    // where one ulp is already ~1e-9 m per axis.
    CHECK(std::abs(back.east_m - v.east_m) < 1e-8);
    CHECK(std::abs(back.north_m - v.north_m) < 1e-8);
    CHECK(std::abs(back.up_m - v.up_m) < 1e-8);
}

TEST_CASE("ECEF to geodetic round trip") {
    const double lats[] = {-90.0, -89.9, -45.0, -12.3, 0.0, 33.7, 45.0, 89.9, 90.0};
    const double lons[] = {-179.9, -90.0, -1.0, 0.0, 47.321, 90.0, 179.9, 180.0};
    const double heights[] = {-100.0, 0.0, 1234.5, 10000.0, 100000.0};
    for (double lat : lats) {
        for (double lon : lons) {
            for (double h : heights) {
                const GeodeticCoord g = GeodeticCoord::from_degrees(lat, lon, h);
                const EcefCoord p = geodetic_to_ecef(g);
                const GeodeticCoord back = ecef_to_geodetic(p);
                const EcefCoord p2 = geodetic_to_ecef(back);
                CHECK(ecef_dist(p, p2) < 1e-6);
                CHECK(std::abs(back.height_m - h) < 1e-6);
            }
        }
    }
}

TEST_CASE("ECEF to geodetic on the polar axis") {
    const GeodeticCoord g = ecef_to_geodetic(EcefCoord{0.0, 0.0, kZPole});
    CHECK(g.lat_rad == kPi / 2.0);
    CHECK(g.lon_rad == 0.0);
    CHECK(std::abs(g.height_m) < 1e-6);

    const GeodeticCoord s = ecef_to_geodetic(EcefCoord{0.0, 0.0, -kZPole});
    CHECK(s.lat_rad == -kPi / 2.0);
}

TEST_CASE("longitude wraps into (-180, 180]") {
    CHECK(GeodeticCoord::from_degrees(0, 270, 0).lon_deg() ==
          doctest::Approx(-90.0).epsilon(1e-12));
    CHECK(GeodeticCoord::from_degrees(0, -270, 0).lon_deg() ==
          doctest::Approx(90.0).epsilon(1e-12));
    CHECK(GeodeticCoord::from_degrees(0, 180, 0).lon_deg() ==
          doctest::Approx(180.0).epsilon(1e-12));
    CHECK(GeodeticCoord::from_degrees(0, -180, 0).lon_deg() ==
          doctest::Approx(180.0).epsilon(1e-12));
    CHECK(GeodeticCoord::from_degrees(0, 540, 0).lon_deg() ==
          doctest::Approx(180.0).epsilon(1e-12));
    CHECK(GeodeticCoord::from_degrees(0, 12.5, 0).lon_deg() ==
          doctest::Approx(12.5).epsilon(1e-12));
}

TEST_CASE("coordinate validation") {
    CHECK_THROWS_AS(GeodeticCoord::from_degrees(90.0001, 0, 0), DataError);
    CHECK_THROWS_AS(GeodeticCoord::from_degrees(-91, 0, 0), DataError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(GeodeticCoord::from_degrees(nan, 0, 0), NonFiniteInput);
    CHECK_THROWS_AS(GeodeticCoord::from_degrees(0, nan, 0), NonFiniteInput);
    CHECK_THROWS_AS(GeodeticCoord::from_degrees(0, 0, nan), NonFiniteInput);
    CHECK_THROWS_AS(ecef_to_geodetic(EcefCoord{nan, 0, 0}), NonFiniteInput);
}
