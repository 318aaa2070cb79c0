#include <doctest.h>
TEST_CASE("placeholder.experiments") { CHECK(true); }
