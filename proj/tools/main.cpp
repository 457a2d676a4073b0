#include "pipeplan/cli.hpp"

int main(int argc, char** argv) { return pipeplan::cli::run(argc, argv); }
