#include "arr2/cli/commands.hpp"

int main(int argc, char** argv) { return arr2::cli::run(argc, argv); }
