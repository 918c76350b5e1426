#include <doctest.h>
TEST_SUITE_BEGIN("rmg");
TEST_SUITE_END();
