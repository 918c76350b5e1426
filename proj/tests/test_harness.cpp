#include <doctest.h>
TEST_SUITE_BEGIN("harness");
TEST_SUITE_END();
