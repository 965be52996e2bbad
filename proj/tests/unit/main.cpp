#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "royden/cli.hpp"

int main(int argc, char** argv) {
  royden::configure_logging();
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
