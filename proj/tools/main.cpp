#include "sbandit_cli.hpp"

int main(int argc, char** argv) { return sbandit::cli::run(argc, argv); }
