#include "ww/cli.hpp"

int main(int argc, char** argv) { return ww::run_cli(argc, argv); }
