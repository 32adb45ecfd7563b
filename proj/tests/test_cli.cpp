#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "seer/cli.hpp"
#include "seer/footer.hpp"
#include "seer/hex.hpp"
#include "seer/sosemanuk.hpp"
#include "test_util.hpp"

using namespace seer;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args, const std::string& input = "",
        CliContext ctx = CliContext{}) {
    std::istringstream in(input);
    std::ostringstream out, err;
    ctx.in = &in;
    ctx.out = &out;
    ctx.err = &err;
    const int code = run_cli(args, ctx);
    return {code, out.str(), err.str()};
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
    std::vector<nlohmann::json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(nlohmann::json::parse(line));
    }
    return out;
}

std::vector<std::uint8_t> kb_of(char c) { return std::vector<std::uint8_t>(1024, static_cast<std::uint8_t>(c)); }

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("destroy one file") {
    testutil::TempDir dir("cli");
    testutil::write_file(dir / "a.txt", kb_of('a'));
    const Run r = run({"destroy", (dir / "a.txt").string(), "--force", "--output", "json", "--no-fsync"});
    CHECK(r.code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0]["status"] == "Destroyed");
    CHECK(lines[0]["bytes_processed"] == 1024);
    CHECK(lines[0]["session_destroyed"] == true);
    CHECK(read_footer(dir / "a.txt").original_length == 1024);
}

TEST_CASE("missing path is a partial failure") {
    testutil::TempDir dir("cli");
    const Run r = run({"destroy", (dir / "missing").string(), "--force", "--output", "json"});
    CHECK(r.code == 2);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0]["status"] == "Failed");
    CHECK(lines[0]["error"].is_string());
}

TEST_CASE("recursive threaded destroy with report file") {
    testutil::TempDir dir("cli");
    fs::create_directories(dir / "corpus/sub");
    for (int i = 0; i < 100; ++i) {
        testutil::write_file(dir / ((i % 2 ? "corpus/sub/f" : "corpus/f") + std::to_string(i)), kb_of('x'));
    }
    const fs::path report = dir / "report.jsonl";
    const Run r = run({"destroy", (dir / "corpus").string(), "--recursive", "--threads", "4", "--force",
                       "--output", "json", "--no-fsync", "--report", report.string()});
    CHECK(r.code == 0);
    CHECK(json_lines(r.out).size() == 100);
    std::ifstream in(report);
    std::stringstream buf;
    buf << in.rdbuf();
    const auto saved = json_lines(buf.str());
    CHECK(saved.size() == 100);
    for (const auto& j : saved) CHECK(j["status"] == "Destroyed");
}

TEST_CASE("confirmation prompt") {
    testutil::TempDir dir("cli");
    testutil::write_file(dir / "a", kb_of('a'));
    Run r = run({"destroy", (dir / "a").string()}, "no\n");
    CHECK(r.code == 1);
    CHECK(r.err.find("Type 'yes'") != std::string::npos);
    CHECK(testutil::read_file(dir / "a") == kb_of('a'));

    r = run({"destroy", (dir / "a").string()}, "");
    CHECK(r.code == 1);
    CHECK(testutil::read_file(dir / "a") == kb_of('a'));

    r = run({"destroy", (dir / "a").string(), "--no-fsync"}, "yes\n");
    CHECK(r.code == 0);
    CHECK(fs::file_size(dir / "a") == 1024 + ErasureFooter::size);
}

TEST_CASE("dry run changes nothing") {
    testutil::TempDir dir("cli");
    testutil::write_file(dir / "a", kb_of('a'));
    const Run r = run({"destroy", (dir / "a").string(), "--dry-run"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Skipped") != std::string::npos);
    CHECK(testutil::read_file(dir / "a") == kb_of('a'));
}

TEST_CASE("dangerous targets need an override") {
    testutil::TempDir dir("cli");
    Run r = run({"destroy", "/", "--recursive", "--force"});
    CHECK(r.code == 1);
    CHECK(r.err.find("filesystem root") != std::string::npos);

    testutil::write_file(dir / "tool", kb_of('t'));
    CliContext ctx;
    ctx.self_path = dir / "tool";
    r = run({"destroy", (dir / "tool").string(), "--force"}, "", ctx);
    CHECK(r.code == 1);
    CHECK(testutil::read_file(dir / "tool") == kb_of('t'));
    r = run({"destroy", dir.path().string(), "--force"}, "", ctx);
    CHECK(r.code == 1);

    r = run({"destroy", (dir / "tool").string(), "--force", "--no-fsync", "--allow-dangerous-path"}, "", ctx);
    CHECK(r.code == 0);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 1);
    CHECK(run({"destroy"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"destroy", "x", "--output", "xml"}).code == 1);
    CHECK(run({"destroy", "x", "--chunk-size", "100", "--force"}).code == 1);
    CHECK(run({"destroy", "x", "--threads", "0", "--force"}).code == 1);
    CHECK(run({"bench", "--method", "seer", "--count", "1", "--size", "0"}).code == 1);
    CHECK(run({"bench", "--method", "seer", "--count", "0"}).code == 1);
    CHECK(run({"bench", "--method", "shred"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify") {
    testutil::TempDir dir("cli");
    testutil::write_file(dir / "done", kb_of('d'));
    testutil::write_file(dir / "plain", kb_of('p'));
    REQUIRE(run({"destroy", (dir / "done").string(), "--force", "--no-fsync"}).code == 0);

    Run r = run({"verify", (dir / "done").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("Destroyed") != std::string::npos);

    r = run({"verify", (dir / "plain").string()});
    CHECK(r.code == 2);
    CHECK(r.out.find("NotDestroyed") != std::string::npos);
    CHECK(testutil::read_file(dir / "plain") == kb_of('p'));

    fs::resize_file(dir / "done", fs::file_size(dir / "done") - 5);
    r = run({"verify", (dir / "done").string(), "--output", "json"});
    CHECK(r.code == 2);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0]["verdict"] == "NotDestroyed");
    CHECK(lines[0]["footer_error"].get<std::string>().find("corrupt_footer") != std::string::npos);

    CHECK(run({"verify", (dir / "nothing").string()}).code == 2);
}

TEST_CASE("audit with a reference") {
    testutil::TempDir dir("cli");
    std::mt19937_64 rng(71);
    const auto original = testutil::random_bytes(rng, 70000);
    testutil::write_file(dir / "ref", original);
    testutil::write_file(dir / "a", original);
    REQUIRE(run({"destroy", (dir / "a").string(), "--force", "--no-fsync"}).code == 0);
    const Run r = run({"audit", (dir / "a").string(), "--reference", (dir / "ref").string(), "--output", "json"});
    CHECK(r.code == 0);
    const auto lines = json_lines(r.out);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0]["residue_hits"] == 0);
    CHECK(lines[0]["verdict"] == "Destroyed");
    CHECK(lines[0]["entropy_bits_per_octet"].get<double>() >= 7.9);

    const Run text = run({"audit", (dir / "a").string()});
    CHECK(text.out.find("chi-square p") != std::string::npos);
}

TEST_CASE("bench comparison table") {
    testutil::TempDir dir("cli");
    const fs::path csv = dir / "out.csv";
    const Run r = run({"bench", "--method", "seer,dod3", "--count", "5", "--size", "1024", "--class", "text",
                       "--no-fsync", "--workdir", (dir / "work").string(), "--csv", csv.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("Seer") != std::string::npos);
    CHECK(r.out.find("Dod3Pass") != std::string::npos);
    CHECK(fs::exists(csv));

    const Run c = run({"bench", "--count", "2", "--size", "64", "--class", "binary", "--no-fsync", "--format",
                       "csv", "--workdir", (dir / "work").string()});
    CHECK(c.code == 0);
    CHECK(c.out.rfind("method,content_class", 0) == 0);
}

TEST_CASE("no secrets in output") {
    testutil::TempDir dir("cli");
    testutil::write_file(dir / "a", kb_of('a'));
    CliContext ctx;
    ctx.test_mode = true;
    ctx.test_seed = 9;
    ctx.test_keylog = dir / "keys.log";
    const Run r = run({"destroy", (dir / "a").string(), "--force", "--output", "json", "--no-fsync"}, "", ctx);
    REQUIRE(r.code == 0);
    std::ifstream log(dir / "keys.log");
    std::string publ, key, iv;
    const bool parsed = static_cast<bool>(log >> publ >> key >> iv);
    REQUIRE(parsed);
    CHECK(key.size() == 64);
    CHECK(r.out.find(key) == std::string::npos);
    CHECK(r.err.find(key) == std::string::npos);
    const Run t = run({"destroy", (dir / "a").string(), "--force", "--no-fsync"}, "", ctx);
    CHECK(t.out.find(key) == std::string::npos);
}

TEST_CASE("test-mode binary decrypts, release binary ignores test mode") {
    testutil::TempDir dir("cli");
    std::mt19937_64 rng(72);
    const auto original = testutil::random_bytes(rng, 5000);
    testutil::write_file(dir / "t", original);
    testutil::write_file(dir / "r", original);
    const std::string log = (dir / "keys.log").string();

    const std::string env = "SEER_TEST_MODE=1 SEER_TEST_SEED=5 SEER_TEST_KEYLOG=" + log + " ";
    CHECK(shell(env + SEER_TESTMODE_BIN + " destroy --force --no-fsync " + (dir / "t").string() +
                " > /dev/null 2>&1") == 0);
    std::ifstream in(log);
    std::string publ, key, iv;
    const bool parsed = static_cast<bool>(in >> publ >> key >> iv);
    REQUIRE(parsed);
    const ErasureFooter f = read_footer(dir / "t");
    CHECK(to_hex(f.u_publ) == publ);
    CHECK(to_hex(f.iv) == iv);
    auto data = testutil::read_file(dir / "t");
    data.resize(f.original_length);
    Sosemanuk(CipherKey::from_bytes(from_hex(key)), CipherIV::from_bytes(from_hex(iv))).apply(data);
    CHECK(data == original);

    // Same seed, same session: deterministic entropy is reproducible.
    testutil::write_file(dir / "t2", original);
    CHECK(shell(env + SEER_TESTMODE_BIN + " destroy --force --no-fsync " + (dir / "t2").string() +
                " > /dev/null 2>&1") == 0);
    CHECK(read_footer(dir / "t2").u_publ == f.u_publ);

    fs::remove(log);
    CHECK(shell(env + SEER_BIN + " destroy --force --no-fsync " + (dir / "r").string() + " > /dev/null 2>&1") == 0);
    CHECK_FALSE(fs::exists(log));
    CHECK(read_footer(dir / "r").u_publ != f.u_publ);
}
