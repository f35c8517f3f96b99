#include "cli.hpp"

int main(int argc, char** argv) { return stochexp::cli::main_entry(argc, argv); }
