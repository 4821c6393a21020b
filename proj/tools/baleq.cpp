#include "baleq/cli.hpp"

int main(int argc, char** argv) { return baleq::run(argc, argv); }
