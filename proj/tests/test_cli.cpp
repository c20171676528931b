#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "treeca/io.hpp"

namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() : dir(fs::temp_directory_path() / "treeca-cli-test") {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

// Exit status of the CLI with stdout captured into `out`.
int cli(const std::string& args, const std::string& out = "/dev/null") {
    const std::string cmd = std::string(TREECA_CLI) + " " + args + " > " + out + " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) n += c == '\n' ? 1 : 0;
    return n;
}

}  // namespace

TEST_CASE("rule, simulate and quotient") {
    Scratch s;
    REQUIRE(cli("rule --name or --out " + (s / "or.json")) == 0);
    CHECK(treeca::io::read_json(s / "or.json")["k"] == 3);
    {
        std::ofstream(s / "seed.txt") << "e 1\n";
    }
    REQUIRE(cli("simulate --rule " + (s / "or.json") + " --config " + (s / "seed.txt") + " --steps 1", s / "out.txt") == 0);
    CHECK(slurp(s / "out.txt") == "## step 0\ne 1\n## step 1\ne 1\n0 1\n1 1\n2 1\n");
    REQUIRE(cli("simulate --format json --steps 3 --rule " + (s / "or.json") + " --config " + (s / "seed.txt"),
                s / "out.json") == 0);
    CHECK(treeca::io::read_json(s / "out.json")["steps"][3]["support_radius"] == 3);

    REQUIRE(cli("quotient --rule " + (s / "or.json") + " --out " + (s / "bar.json")) == 0);
    CHECK(treeca::io::read_json(s / "bar.json")["table"].size() == 8);

    REQUIRE(cli("rule --index 1 --out " + (s / "loud.json")) == 0);
    CHECK(cli("simulate --rule " + (s / "loud.json") + " --config " + (s / "seed.txt")) == 2);
}

TEST_CASE("census output") {
    Scratch s;
    REQUIRE(cli("census --k 3 --alphabet 2 --radius 1 --samples 8 --out " + (s / "c.csv") + " --summary " +
                (s / "sum.json")) == 0);
    const std::string csv = slurp(s / "c.csv");
    CHECK(count_lines(csv) == 258);
    CHECK(treeca::io::read_json(s / "sum.json")["quiescent"] == 128);
    REQUIRE(cli("census --k 3 --samples 8 --shard 0:128", s / "a.csv") == 0);
    CHECK(count_lines(slurp(s / "a.csv")) == 130);
    REQUIRE(cli("census --k 2 --samples 8 --format jsonl --out " + (s / "c.jsonl")) == 0);
    CHECK(count_lines(slurp(s / "c.jsonl")) == 64);
}

TEST_CASE("classify, enumerate and verify") {
    Scratch s;
    REQUIRE(cli("classify --index 0", s / "zero.json") == 0);
    const auto zero = treeca::io::read_json(s / "zero.json");
    CHECK(zero["tree_nilp_horizon"] == 1);
    CHECK(zero["quot_nilp_horizon"] == 1);
    REQUIRE(cli("enumerate-balls --radius 2 --count", s / "n.txt") == 0);
    CHECK(slurp(s / "n.txt") == "112\n");
    REQUIRE(cli("enumerate-balls --k 2", s / "b.txt") == 0);
    CHECK(count_lines(slurp(s / "b.txt")) == 6);
    CHECK(cli("verify --suite singleton --cases 1") == 0);
    CHECK(cli("verify --suite transfer --dump-dir " + (s / "dumps")) == 0);
}

TEST_CASE("exit codes") {
    CHECK(cli("") == 2);
    CHECK(cli("census --no-such-flag") == 2);
    CHECK(cli("census --shard 9:3") == 2);
    CHECK(cli("enumerate-balls --radius 4 --count") == 2);
    CHECK(cli("simulate --rule /nonexistent.json --config /nonexistent.txt") == 2);
    CHECK(cli("verify --suite nope") == 2);
}
