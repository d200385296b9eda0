#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "drt/log.hpp"

int main(int argc, char** argv) {
    drt::set_log_level("warn");
    doctest::Context ctx(argc, argv);
    return ctx.run();
}
