#include "degmap/cli.hpp"

int main(int argc, char** argv) { return degmap::run_cli(argc, argv); }
