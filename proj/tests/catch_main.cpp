#define CATCH_AMALGAMATED_CUSTOM_MAIN
#include <catch2/catch_amalgamated.cpp>

#include "modlat/common.hpp"

int main(int argc, char* argv[]) {
  modlat::init_precision_from_env();
  return Catch::Session().run(argc, argv);
}
