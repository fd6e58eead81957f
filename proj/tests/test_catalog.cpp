#include <catch2/catch_amalgamated.hpp>
#include "reggetor/catalog.hpp"
TEST_CASE("placeholder test_catalog") { CHECK(true); }
