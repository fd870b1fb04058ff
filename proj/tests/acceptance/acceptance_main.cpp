// One line per acceptance criterion; tolerances are fixed inside each criterion.
#include "horocount/acceptance.hpp"
#include "horocount/cli.hpp"

#include <algorithm>
#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
    using namespace horocount::acceptance;
    const Scale scale = (argc > 1 && std::strcmp(argv[1], "--quick") == 0) ? Scale::quick : Scale::full;
    const auto results = run_all(scale, horocount::cli::thread_count(0), std::cout);
    const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
