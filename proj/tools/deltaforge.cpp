#include "cli_app.hpp"

int main(int argc, char** argv) { return deltaforge::cli::run(argc, argv); }
