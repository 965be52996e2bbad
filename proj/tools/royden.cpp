#include <string>
#include <vector>

#include "royden/cli.hpp"

int main(int argc, char** argv) {
  royden::configure_logging();
  return royden::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
