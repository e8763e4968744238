#include "fxhedge/cli.hpp"

int main(int argc, char** argv) { return fxhedge::cli_main(argc, argv); }
