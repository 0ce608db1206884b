#include "qdual/cli.hpp"

int main(int argc, char** argv) { return qdual::cli::main(argc, argv); }
