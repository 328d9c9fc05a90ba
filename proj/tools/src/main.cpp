#include "xmlad/cli.hpp"

int main(int argc, char** argv) { return xmlad::cli::run(argc, argv); }
