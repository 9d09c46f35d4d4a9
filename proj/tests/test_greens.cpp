#include <doctest.h>
TEST_CASE("placeholder_greens") { CHECK(true); }
