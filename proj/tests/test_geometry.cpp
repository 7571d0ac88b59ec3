#include <doctest.h>
#include "domeloc/geometry.hpp"
TEST_CASE("placeholder") { CHECK(domeloc::DomeSpec{}.sphere_radius_mm == 27.0); }
