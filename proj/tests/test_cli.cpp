// End-to-end CLI checks: exit-code contract (0 ok, 2 data errors,
// 3 precondition violations) and the synth -> calibrate -> enroll ->
// identify -> evaluate flow. Driven by ctest with the binary path:
//   test_cli <path-to-facegal> <scratch-dir>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli;
fs::path dir;
int failures = 0;

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " > " + (dir / "out.txt").string() + " 2> " +
                            (dir / "err.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string last_stdout() {
    std::ifstream in(dir / "out.txt");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAILED: " << what << "\n";
    }
}

void check_exit(const std::string& args, int expected) {
    const int code = run(args);
    check(code == expected,
          "`" + args + "` exited " + std::to_string(code) + ", expected " +
              std::to_string(expected));
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: test_cli <facegal-binary> <scratch-dir>\n";
        return 2;
    }
    cli = argv[1];
    dir = argv[2];
    fs::create_directories(dir);

    const std::string data = (dir / "data.csv").string();
    const std::string snapshot = (dir / "gallery.json").string();

    // happy path
    check_exit("synth --out " + data + " --classes 30 --dim 8 --samples fixed:3"
               " --concentration 2 --seed 4", 0);
    check_exit("calibrate --dataset " + data + " --pairs 60 --folds 10 --seed 1"
               " --out " + (dir / "calibration.json").string(), 0);
    check_exit("enroll --snapshot " + snapshot + " --dataset " + data +
               " --init-threshold 0.3779", 0);
    check(fs::exists(snapshot), "enroll wrote a snapshot");
    check_exit("enroll --snapshot " + snapshot + " --dataset " + data, 0);  // append run
    check_exit("identify --snapshot " + snapshot + " --query " + data, 0);
    check(last_stdout().find("identified=class_0001") != std::string::npos,
          "identify reports a known identity");
    check_exit("evaluate --dataset " + data + " --policy both --init-threshold 0.3"
               " --repetitions 2 --seed 5 --report " + (dir / "report.json").string() +
               " --curve " + (dir / "curve.csv").string(), 0);
    check(fs::exists(dir / "report.json") && fs::exists(dir / "curve.csv"),
          "evaluate wrote report and curve");
    check_exit("--help", 0);

    // data errors -> 2
    check_exit("identify --snapshot " + (dir / "missing.json").string() + " --query " + data, 2);
    check_exit("calibrate --dataset " + (dir / "missing.csv").string(), 2);
    {
        std::ofstream bad(dir / "bad.csv");
        bad << "#dim=2,count=1\nrow1,A,1.0\n";  // wrong field count
    }
    check_exit("calibrate --dataset " + (dir / "bad.csv").string(), 2);
    check_exit("no-such-command", 2);
    check_exit("evaluate --dataset " + data + " --policy both", 3);  // missing init threshold
    check_exit("evaluate --dataset " + data + " --policy fixed:7", 3);  // out of range
    check_exit("synth --out " + data + " --classes 0 --dim 8", 3);

    if (failures == 0) {
        std::puts("cli checks passed");
        return 0;
    }
    std::printf("%d cli checks failed\n", failures);
    return 1;
}
