#include <doctest.h>
TEST_CASE("placeholder_iteration") { CHECK(true); }
