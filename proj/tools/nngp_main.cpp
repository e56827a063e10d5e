#include "nngp/run.hpp"

int main(int argc, char** argv) { return nngp::run_cli(argc, argv); }
