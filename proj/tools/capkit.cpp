#include "capkit/cli.hpp"

int main(int argc, char** argv) { return capkit::cli::main(argc, argv); }
