#include "gyroproxy/cli/app.hpp"

int main(int argc, char** argv) { return gyroproxy::cli::run(argc, argv); }
