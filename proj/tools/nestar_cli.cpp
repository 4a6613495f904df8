#include <string>
#include <vector>

#include "nestar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nestar::cli::run(args);
}
