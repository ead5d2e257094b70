#include "cli.hpp"
int main(int argc, char** argv) { return csrp::cli_main(argc, argv); }
