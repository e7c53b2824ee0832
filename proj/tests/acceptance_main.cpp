#include <cstdio>
#include <cstdlib>
#include <string>

#include "htrm/acceptance.hpp"

int main(int argc, char** argv) {
    htrm::AcceptanceOptions opt;
    std::string suite = argc > 1 ? argv[1] : "all";
    if (const char* j = std::getenv("HEAVYTAIL_JOBS")) opt.jobs = std::atoi(j);
    int failed = 0;
    for (int id : htrm::suite_ids(suite)) {
        auto r = htrm::run_criterion(id, opt);
        std::printf("%s\n", htrm::format_result(r).c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    std::printf("%d criteria failed\n", failed);
    return failed ? 1 : 0;
}
