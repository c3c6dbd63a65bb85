// Catch2 v3 amalgamated translation unit; supplies the test runner's main().
#include <catch2/catch_amalgamated.cpp>
