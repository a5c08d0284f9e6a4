#include <iostream>

#include "swathcube_tools/fixture.hpp"

int main(int argc, char** argv) {
  return swathcube::tools::fixture_main({argv + 1, argv + argc}, std::cout, std::cerr);
}
