#include <doctest.h>
TEST_CASE("placeholder_profiles") { CHECK(true); }
