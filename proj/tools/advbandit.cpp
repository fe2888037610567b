#include "advbandit/cli.hpp"

int main(int argc, char** argv) { return advbandit::run_cli(argc, argv); }
