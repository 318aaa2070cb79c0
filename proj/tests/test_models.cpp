#include <doctest.h>
TEST_CASE("placeholder.models") { CHECK(true); }
