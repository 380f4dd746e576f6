#include "transgress/cli.hpp"

int main(int argc, char** argv) { return transgress::run_cli(argc, argv); }
