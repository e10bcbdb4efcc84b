#include <shapesphere/cli.hpp>

int main(int argc, char** argv) { return shapesphere::cli::run_cli(argc, argv); }
