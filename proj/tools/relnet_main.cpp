#include "relnet/cli.hpp"

int main(int argc, char** argv) { return relnet::run_cli(argc, argv); }
