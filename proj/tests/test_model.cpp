#include <doctest.h>
TEST_CASE("placeholder_model") { CHECK(true); }
