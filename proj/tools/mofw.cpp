#include "mofw/cli.hpp"

int main(int argc, char** argv) { return mofw::cli::run(argc, argv); }
