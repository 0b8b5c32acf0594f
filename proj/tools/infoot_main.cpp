#include "infoot/cli.hpp"

int main(int argc, char** argv) { return infoot::cli_run(argc, argv); }
