#include "kgioh_cli.hpp"

int main(int argc, char** argv) { return kgioh::cli::run(argc, argv); }
