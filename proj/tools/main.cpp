#include <string>
#include <vector>

#include "lamsa/dispatch.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lamsa::dispatch(args);
}
