// Acceptance driver: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <cstdio>

#include <orbivert/suite.hpp>

int main()
{
    int failed = 0;
    for (const auto& k : orbivert::suite::criteria()) {
        const auto r = orbivert::suite::run_criterion(k);
        std::printf("%s criterion %d: %s (%.2f s of %.0f s; %s)\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                    r.seconds, r.budget, r.detail.c_str());
        std::fflush(stdout);
        failed += r.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(orbivert::suite::criteria().size()) - failed,
                orbivert::suite::criteria().size());
    return failed == 0 ? 0 : 1;
}
