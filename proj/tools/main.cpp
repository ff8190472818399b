#include "experiments.hpp"

int main(int argc, char** argv) { return betasparse::experiments::run_cli(argc, argv); }
