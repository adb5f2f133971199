#include "cli.hpp"

int main(int argc, char** argv) { return superloop::cli::run(argc, argv); }
