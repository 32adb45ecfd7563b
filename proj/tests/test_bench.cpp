#include <doctest.h>

#include <algorithm>

#include "seer/bench.hpp"
#include "seer/error.hpp"
#include "seer/footer.hpp"
#include "test_util.hpp"

using namespace seer;
namespace fs = std::filesystem;

namespace {

BenchSpec small_spec(BenchMethod m, std::uint64_t count, std::uint64_t size,
                     ContentClass c = ContentClass::text) {
    BenchSpec s;
    s.method = m;
    s.file_count = count;
    s.file_size = size;
    s.content_class = c;
    s.fsync = false;
    return s;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("spec validation and names") {
    CHECK_THROWS_AS(small_spec(BenchMethod::seer, 0, 10).validate(), Error);
    CHECK_THROWS_AS(small_spec(BenchMethod::seer, 1, 0).validate(), Error);
    BenchSpec s = small_spec(BenchMethod::seer, 1, 1);
    s.repetitions = 0;
    CHECK_THROWS_AS(s.validate(), Error);

    CHECK(parse_method("seer") == BenchMethod::seer);
    CHECK(parse_method("dod3") == BenchMethod::dod3_pass);
    CHECK(parse_method("Gutmann35") == BenchMethod::gutmann35);
    CHECK(parse_method("single") == BenchMethod::single_pass);
    CHECK_THROWS_AS(parse_method("shred"), Error);
    CHECK(parse_content_class("image") == ContentClass::image_like);
    CHECK(to_string(ContentClass::binary) == "Binary");
}

TEST_CASE("corpus shape and determinism") {
    testutil::TempDir a("bench"), b("bench");
    const auto spec = small_spec(BenchMethod::seer, 100, 1024);
    const auto files = make_corpus(spec, a.path());
    CHECK(files.size() == 100);
    for (const auto& f : files) REQUIRE(fs::file_size(f) == 1024);

    const auto again = make_corpus(spec, b.path());
    for (std::size_t i = 0; i < files.size(); ++i) {
        REQUIRE(testutil::read_file(files[i]) == testutil::read_file(again[i]));
    }
    BenchSpec other = spec;
    other.seed = 2;
    CHECK(corpus_file_content(ContentClass::text, 2, 0, 1024) != testutil::read_file(files[0]));

    for (auto b : testutil::read_file(files[3])) {
        REQUIRE(((b >= 0x20 && b < 0x7F) || b == '\n'));
    }
}

TEST_CASE("content classes carry their signatures") {
    for (std::uint64_t size : {3u, 24u, 1024u, 70000u}) {
        const auto img = corpus_file_content(ContentClass::image_like, 1, 0, size);
        REQUIRE(img.size() == size);
        CHECK(img[0] == 0xFF);
        CHECK(img[1] == 0xD8);
        CHECK(img[2] == 0xFF);
        const auto bin = corpus_file_content(ContentClass::binary, 1, 0, size);
        REQUIRE(bin.size() == size);
        CHECK(bin[0] == 'M');
        CHECK(bin[1] == 'Z');
    }
    CHECK(corpus_file_content(ContentClass::text, 1, 0, 1).size() == 1);
}

TEST_CASE("disk-space shortfall is reported before writing") {
    testutil::TempDir dir("bench");
    auto spec = small_spec(BenchMethod::seer, 1000, std::uint64_t{1} << 50);
    try {
        make_corpus(spec, dir.path());
        FAIL("expected io error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::io);
    }
    CHECK(fs::is_empty(dir.path()));
}

TEST_CASE("overwrite pass counts") {
    testutil::TempDir dir("bench");
    auto entropy = EntropySource::system();
    const std::size_t size = 10000;
    struct Case {
        BenchMethod method;
        unsigned passes;
    };
    for (const Case c : {Case{BenchMethod::single_pass, 1}, Case{BenchMethod::dod3_pass, 3},
                         Case{BenchMethod::gutmann35, 35}}) {
        const fs::path p = dir / "f";
        testutil::write_file(p, std::vector<std::uint8_t>(size, 'a'));
        const OverwriteCount count = overwrite_file(p, c.method, entropy, false);
        CHECK(count.passes == c.passes);
        CHECK(count.bytes_written == c.passes * size);
        CHECK(fs::file_size(p) == size);
        // Every method ends on a random pass.
        const auto after = testutil::read_file(p);
        CHECK(std::count(after.begin(), after.end(), 'a') < 200);
    }
    CHECK_THROWS_AS(overwrite_file(dir / "f", BenchMethod::seer, entropy, false), Error);
}

TEST_CASE("write-volume law through run_bench") {
    testutil::TempDir dir("bench");
    const std::uint64_t count = 20, size = 4096, payload = count * size;
    const auto seer = run_bench(small_spec(BenchMethod::seer, count, size), dir.path());
    CHECK(seer.valid);
    CHECK(seer.payload_bytes == payload);
    CHECK(seer.payload_passes_written == payload);
    CHECK(seer.bytes_written == payload + count * ErasureFooter::size);

    const auto single = run_bench(small_spec(BenchMethod::single_pass, count, size), dir.path());
    CHECK(single.bytes_written == payload);
    const auto dod = run_bench(small_spec(BenchMethod::dod3_pass, count, size), dir.path());
    CHECK(dod.bytes_written == 3 * payload);
    const auto gut = run_bench(small_spec(BenchMethod::gutmann35, count, size), dir.path());
    CHECK(gut.bytes_written == 35 * payload);
}

TEST_CASE("result statistics") {
    testutil::TempDir dir("bench");
    auto spec = small_spec(BenchMethod::seer, 10, 1024);
    spec.repetitions = 3;
    const auto r = run_bench(spec, dir.path());
    CHECK(r.repetition_seconds.size() == 3);
    auto sorted = r.repetition_seconds;
    std::sort(sorted.begin(), sorted.end());
    CHECK(r.total_seconds == sorted[1]);
    CHECK(r.mean_ms_per_file == doctest::Approx(r.total_seconds * 1000.0 / 10));
    CHECK(r.stddev_ms >= 0.0);
    CHECK_FALSE(fs::exists(dir / "corpus"));
}

TEST_CASE("time grows with file count") {
    testutil::TempDir dir("bench");
    double previous = 0.0;
    for (std::uint64_t count : {10u, 100u, 1000u}) {
        auto spec = small_spec(BenchMethod::seer, count, 1024);
        spec.repetitions = 3;
        const auto r = run_bench(spec, dir.path());
        CHECK(r.total_seconds >= previous);
        previous = r.total_seconds;
    }
}

TEST_CASE("tables and CSV") {
    std::vector<BenchResult> grid;
    for (auto c : {ContentClass::text, ContentClass::image_like, ContentClass::binary}) {
        for (std::uint64_t n : {100u, 1000u, 10000u}) {
            BenchResult r;
            r.spec = small_spec(BenchMethod::seer, n, 1024, c);
            r.repetition_seconds = {0.1 * static_cast<double>(n) / 100.0 + 0.123456789, 0.3};
            r.total_seconds = r.repetition_seconds[0];
            grid.push_back(r);
        }
    }
    const std::string table = render_table(grid);
    CHECK(line_count(table) == 4);
    CHECK(table.find("100 x 1024 B") != std::string::npos);
    CHECK(table.find("10000 x 1024 B") != std::string::npos);
    CHECK(table.find("ImageLike") != std::string::npos);

    const std::string single = render_table(std::span(grid).first(1));
    CHECK(line_count(single) == 2);

    CHECK_THROWS_AS(render_table({}), Error);

    const std::string csv = render_csv(grid);
    CHECK(csv.rfind("method,content_class,file_count,file_size,repetition,total_seconds,mean_ms_per_file\n", 0) == 0);
    const auto rows = parse_csv(csv);
    CHECK(rows.size() == 18);
    CHECK(rows == to_csv_rows(grid));
    CHECK(rows[1].repetition == 2);
    CHECK(rows[1].total_seconds == 0.3);

    CHECK_THROWS_AS(parse_csv(""), Error);
    CHECK_THROWS_AS(parse_csv("nope\n"), Error);
    CHECK_THROWS_AS(parse_csv(csv + "Seer,Text,1,2\n"), Error);
    CHECK_THROWS_AS(parse_csv(csv + "Seer,Text,x,2,1,0.1,0.1\n"), Error);
}
