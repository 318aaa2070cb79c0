#include <doctest.h>
TEST_CASE("placeholder.states") { CHECK(true); }
