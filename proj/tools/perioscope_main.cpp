#include "perioscope/cli.hpp"

int main(int argc, char** argv) { return perioscope::run_cli(argc, argv); }
