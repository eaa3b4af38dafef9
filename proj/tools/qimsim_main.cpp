#include "qimsim/cli.hpp"

int main(int argc, char** argv) { return qim::cli::run(argc, argv); }
