#include "nilgeo/cli_app.hpp"

int main(int argc, char **argv) { return nilgeo::run_cli(argc, argv); }
