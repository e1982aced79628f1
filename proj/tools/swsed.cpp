#include "swsed/cli.hpp"

int main(int argc, char** argv) { return swsed::run_cli(argc, argv); }
