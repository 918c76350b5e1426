#include <doctest.h>
TEST_SUITE_BEGIN("backbone");
TEST_SUITE_END();
