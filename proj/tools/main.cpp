#include "elastpass/cli_app.hpp"

int main(int argc, char** argv) { return elastpass::runCli(argc, argv); }
