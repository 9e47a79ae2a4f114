#include "sncslice_cli/commands.hpp"

int main(int argc, char** argv) { return sncslice::cli::run(argc, argv); }
