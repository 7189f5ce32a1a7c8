#include "talkmix/cli.hpp"

int main(int argc, char** argv) { return talkmix::run_cli(argc, argv); }
