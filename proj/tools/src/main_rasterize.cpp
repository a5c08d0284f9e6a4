#include <iostream>

#include "swathcube_tools/commands.hpp"

int main(int argc, char** argv) {
  return swathcube::tools::rasterize_main({argv + 1, argv + argc}, std::cout, std::cerr);
}
