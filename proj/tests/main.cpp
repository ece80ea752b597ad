#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "qw/numerics.hpp"

int main(int argc, char** argv) {
  qw::set_precision_bits(256);
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
