#include <doctest.h>
TEST_SUITE_BEGIN("tracker");
TEST_SUITE_END();
