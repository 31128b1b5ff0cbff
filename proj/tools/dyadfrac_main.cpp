#include "dyadfrac/cli.hpp"

int main(int argc, char** argv) { return dyadfrac::run_cli(argc, argv); }
