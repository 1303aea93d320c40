#include "streamrate/cli.hpp"

int main(int argc, char** argv) { return streamrate::cli::run(argc, argv); }
