#include <doctest.h>
TEST_CASE("placeholder_pdesim") { CHECK(true); }
