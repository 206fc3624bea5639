#include "fogmatch/cli.hpp"

int main(int argc, char** argv) { return fogmatch::run_cli(argc, argv); }
