#include <string>
#include <vector>

#include "sealci/experiments.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sealci::run_cli(std::move(args));
}
