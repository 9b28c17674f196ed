#include "bar/cli.hpp"

int main(int argc, char** argv) { return bar::run_cli(argc, argv); }
