#include <doctest.h>
TEST_CASE("placeholder_params") { CHECK(true); }
