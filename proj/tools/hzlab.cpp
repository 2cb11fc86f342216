#include "hzlab/cli.hpp"

int main(int argc, char** argv) { return hzlab::cli::run(argc, argv); }
