#include "dgsp/cli_app.hpp"

int main(int argc, char** argv) { return dgsp::cli_main(argc, argv); }
