#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wetsim/units.hpp"

using namespace wetsim;
using namespace wetsim::constants;

TEST_CASE("dbm_to_watts handles reference levels") {
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(dbm_to_watts(-30.0) == doctest::Approx(1e-6).epsilon(1e-12));
    CHECK(dbm_to_watts(10.0) == doctest::Approx(1e-2).epsilon(1e-12));
}

TEST_CASE("watts_to_dbm handles reference levels") {
    CHECK(watts_to_dbm(1e-3) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(watts_to_dbm(1.0) == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(watts_to_dbm(2e-3) == doctest::Approx(3.0102999566398120).epsilon(1e-12));
}

TEST_CASE("watts_to_dbm maps zero to negative infinity") {
    const double level = watts_to_dbm(0.0);
    CHECK(std::isinf(level));
    CHECK(level < 0.0);
}

TEST_CASE("watts_to_dbm rejects negative power") {
    CHECK_THROWS_AS(watts_to_dbm(-1e-9), std::invalid_argument);
    CHECK_THROWS_AS(watts_to_dbm(-1.0), std::invalid_argument);
}

TEST_CASE("dbm/watts conversions are inverses") {
    const double levels[] = {-120.0, -37.25, -3.5147, 0.0, 12.75, 30.0, 61.0};
    for (double dbm : levels) {
        CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
    }
    const double powers[] = {1e-15, 4.2e-9, 1e-3, 0.5, 1.0, 250.0};
    for (double w : powers) {
        CHECK(dbm_to_watts(watts_to_dbm(w)) == doctest::Approx(w).epsilon(1e-12));
    }
}

TEST_CASE("db_to_linear and linear_to_db round trip") {
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(db_to_linear(3.0102999566398120) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(db_to_linear(-10.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0).epsilon(1e-12));
    const double values[] = {-23.0, -6.0206, 0.0, 8.4, 40.0};
    for (double db : values) {
        CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
    }
}

TEST_CASE("wrap_phase lands in [0, 2*pi)") {
    CHECK(wrap_phase(0.0) == doctest::Approx(0.0));
    CHECK(wrap_phase(two_pi) == doctest::Approx(0.0));
    CHECK(wrap_phase(-pi) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(wrap_phase(7.0 * pi) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(wrap_phase(-1e-9) < two_pi);
    CHECK(wrap_phase(-1e-9) >= 0.0);

    // Sweep a wide range and confirm both the interval and 2*pi periodicity.
    for (int i = -40; i <= 40; ++i) {
        const double raw = 0.37 + 1.7 * static_cast<double>(i);
        const double wrapped = wrap_phase(raw);
        CHECK(wrapped >= 0.0);
        CHECK(wrapped < two_pi);
        CHECK(std::remainder(wrapped - raw, two_pi) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("physical constants match CODATA values") {
    CHECK(speed_of_light == doctest::Approx(299792458.0));
    CHECK(vacuum_permittivity == doctest::Approx(8.8541878128e-12).epsilon(1e-9));
    CHECK(two_pi == doctest::Approx(2.0 * pi).epsilon(1e-15));
}
