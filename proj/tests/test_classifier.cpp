#include <doctest.h>
TEST_SUITE_BEGIN("classifier");
TEST_SUITE_END();
