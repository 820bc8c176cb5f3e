#include "angelesco/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return angelesco::run_cli(std::move(args));
}
