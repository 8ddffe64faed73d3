#include <string>
#include <vector>

#include "noongen/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return noongen::dispatch(args);
}
