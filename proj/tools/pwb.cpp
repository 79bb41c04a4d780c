#include "pwb/cli.hpp"

int main(int argc, char** argv) { return pwb::cli::run(argc, argv); }
