#include "acceptance_suite.hpp"

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    return run_acceptance_suite(cli) == 0 ? 0 : 1;
}
