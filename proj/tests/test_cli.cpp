// Integration tests of the cartanq CLI contract: exit codes, JSON shapes,
// byte-identical determinism, seed handling, and the wall-clock budget.
// Usage: test_cli <path-to-cartanq-binary>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

namespace {

int failures = 0;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!p) {
        std::cerr << "popen failed for: " << cmd << "\n";
        std::exit(3);
    }
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int st = pclose(p);
    r.exit_code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

void expect(bool cond, const std::string& what) {
    if (cond) {
        std::cout << "ok: " << what << "\n";
    } else {
        std::cout << "FAILED: " << what << "\n";
        ++failures;
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <cartanq-binary>\n";
        return 3;
    }
    std::string cli = argv[1];

    {
        RunResult r = run(cli + " verify --suite lie --n 1");
        expect(r.exit_code == 0, "verify --suite lie --n 1 exits 0");
        expect(r.out.find("\"suite\": \"lie\"") != std::string::npos,
               "lie report names its suite");
    }
    {
        RunResult r = run(cli + " verify --suite twist --family horizontal --n 1");
        expect(r.exit_code == 2, "horizontal twist at n=1 is a usage error (exit 2)");
    }
    {
        RunResult r = run(cli + " verify --suite nonsense --n 1");
        expect(r.exit_code == 2, "unknown suite is a usage error (exit 2)");
    }
    {
        RunResult r = run(cli + " dims --n 1 --p 5");
        expect(r.exit_code == 0, "dims --n 1 --p 5 exits 0");
        expect(r.out.find("\"lie\": 125") != std::string::npos &&
                   r.out.find("\"utq\": \"5^126\"") != std::string::npos,
               "dims reports lie=125, utq=5^126");
    }
    {
        RunResult r = run(cli + " bracket '[1;0;1]' '[1;0;2]' --n 1");
        expect(r.exit_code == 0 && r.out.find("[1;0;2]") != std::string::npos,
               "bracket [h,e] = e");
    }
    {
        RunResult r = run(cli + " bracket '[1;0]' '[1;0;2]' --n 1");
        expect(r.exit_code == 2, "malformed multi-index is a usage error (exit 2)");
    }
    {
        RunResult r = run(cli +
                          " delta '[0;1;0]' --family vertical --k 1 --n 1 --p 5 --q 0");
        expect(r.exit_code == 0 && r.out.find("\"left\"") != std::string::npos &&
                   r.out.find("\"right\"") != std::string::npos &&
                   r.out.find("\"t\"") != std::string::npos &&
                   r.out.find("\"c\"") != std::string::npos,
               "delta prints the documented term schema");
    }
    {
        // byte-identical reports on re-run (timings disabled by default)
        std::string cmd = cli + " verify --suite twist --n 2";
        RunResult r1 = run(cmd), r2 = run(cmd);
        expect(r1.exit_code == 0 && r1.out == r2.out,
               "twist report is byte-identical on re-run");
    }
    {
        // seeded modular sample: byte-identical, and CARTANQ_SEED overrides --seed
        std::string base = cli +
                           " verify --suite modular --n 1 --p 5 --q 1 "
                           "--family contact --sample 3";
        RunResult a = run(base + " --seed 77");
        RunResult b = run(base + " --seed 77");
        RunResult c = run("CARTANQ_SEED=77 " + base + " --seed 1");
        expect(a.exit_code == 0 && a.out == b.out,
               "seeded modular report is byte-identical on re-run");
        expect(a.out == c.out, "CARTANQ_SEED overrides --seed");
    }
    {
        RunResult r = run(cli + " verify --suite lie --n 1 --max-seconds 0");
        expect(r.exit_code == 1, "exhausted budget exits 1");
        expect(r.out.find("\"incomplete\"") != std::string::npos &&
                   r.out.find("\"skipped\"") != std::string::npos,
               "exhausted budget marks the report incomplete with skipped items");
    }
    {
        RunResult r = run(cli + " twist-check --family vertical --k 1 --n 1");
        expect(r.exit_code == 0 && r.out.find("\"status\": \"pass\"") != std::string::npos,
               "twist-check passes for the vertical twist");
    }

    if (failures) {
        std::cout << failures << " CLI check(s) failed\n";
        return 1;
    }
    std::cout << "all CLI checks passed\n";
    return 0;
}
