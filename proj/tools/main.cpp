#include "cli.hpp"

int main(int argc, char** argv) { return abmap::cli::run(argc, argv); }
