#include <doctest.h>
TEST_SUITE_BEGIN("optimizer");
TEST_SUITE_END();
