#include "slim/cli.hpp"

int main(int argc, char** argv) { return slim::cli::run(argc, argv); }
