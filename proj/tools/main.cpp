#include "hodgelab/cli.hpp"

int main(int argc, char** argv) { return hodgelab::run_cli(argc, argv); }
