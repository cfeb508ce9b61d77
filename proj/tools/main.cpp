#include <clocale>

#include "qdcascade/cli.hpp"

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");  // CSV output uses '.' decimals unconditionally
    return qdc::cli::run_cli(argc, argv);
}
