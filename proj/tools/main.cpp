// main.cpp — floquet-dd entry point

#include "fdd/cli.hpp"

int main(int argc, char** argv) { return fdd::cli::main(argc, argv); }
