#include "latticebolt/cli.hpp"

int main(int argc, char** argv) { return lbm::run_cli(argc, argv); }
