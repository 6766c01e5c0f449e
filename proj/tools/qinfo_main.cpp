#include "qinfo/cli/commands.hpp"

int main(int argc, char** argv) { return qinfo::cli::run(argc, argv); }
