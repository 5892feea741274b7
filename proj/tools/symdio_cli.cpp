#include "symdio/cli.hpp"

int main(int argc, char** argv) { return symdio::cli::run(argc, argv); }
