#include "acmdp/cli.hpp"

int main(int argc, char** argv) { return acmdp::cli_main(argc, argv); }
