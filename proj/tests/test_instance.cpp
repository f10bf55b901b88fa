#include "doctest.h"
#include "routeq/instance.hpp"
TEST_CASE("smoke") { CHECK(routeq::euc2d({0,0},{3,4}) == 5); }
