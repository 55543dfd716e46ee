#include "modl/cli.hpp"

int main(int argc, char** argv) { return modl::run_cli(argc, argv); }
