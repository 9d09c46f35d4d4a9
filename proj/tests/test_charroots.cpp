#include <doctest.h>
TEST_CASE("placeholder_charroots") { CHECK(true); }
