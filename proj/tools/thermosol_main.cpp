#include <vector>

#include "thermosol/config.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return thermosol::run_cli(args);
}
