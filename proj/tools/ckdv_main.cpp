#include "ckdv/cli.hpp"

int main(int argc, char** argv) { return ckdv::cli::run(argc, argv); }
