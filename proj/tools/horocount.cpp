#include "horocount/cli.hpp"

int main(int argc, char** argv) { return horocount::cli::dispatch(argc, argv); }
