#include "cli_app.hpp"

int main(int argc, char** argv) {
    return swsgd::cli::cli_main(argc, argv);
}
