#include <string>
#include <vector>

#include "ubsr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ubsr::cli::run(args);
}
