#include "crint/cli.hpp"

int main(int argc, char** argv) { return crint::cli::main(argc, argv); }
