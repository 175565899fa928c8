#include "nsp_app/acceptance.hpp"

#include <iostream>

// One line per criterion; exit status 0 iff all pass.
int main(int argc, char** argv)
{
    const std::filesystem::path out = argc > 1 ? argv[1] : "acceptance_out";
    const auto results = nsp::app::run_acceptance(out, std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.pass() ? 0 : 1;
    std::cout << results.size() - failed << "/" << results.size() << " criteria pass\n";
    return failed == 0 ? 0 : 1;
}
