#include <doctest.h>
TEST_CASE("placeholder.mixing") { CHECK(true); }
