#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qtlab/json_io.hpp"

namespace {

using qtlab::Json;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string cli_path() {
    if (const char* p = std::getenv("QTLAB_CLI_PATH")) return p;
#ifdef QTLAB_CLI_PATH
    return QTLAB_CLI_PATH;
#else
    FAIL("QTLAB_CLI_PATH not set");
    return {};
#endif
}

// run the binary with a shell command line; stdout captured, stderr dropped
RunResult run(const std::string& args, const std::string& stdin_text = "") {
    std::string cmd;
    if (!stdin_text.empty()) {
        const auto tmp = std::filesystem::temp_directory_path() / "qtlab_cli_stdin.json";
        std::ofstream(tmp) << stdin_text;
        cmd = cli_path() + " " + args + " < " + tmp.string() + " 2>/dev/null";
    } else {
        cmd = cli_path() + " " + args + " 2>/dev/null";
    }
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

const char* kHirzebruch = R"({"shape":[1,1],"mode":"int","blocks":[[[1],[3]],[[0],[1]]]})";
const char* kCyclic = R"({"shape":[1,1],"mode":"int","blocks":[[[1],[1]],[[2],[1]]]})";
const char* kInvalid = R"({"shape":[1,1],"mode":"int","blocks":[[[1],[1]],[[1],[1]]]})";

std::filesystem::path write_temp(const char* name, const std::string& text) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("validate") {
    RunResult ok = run("validate", kHirzebruch);
    CHECK(ok.exit_code == 0);
    Json j = Json::parse(ok.out);
    CHECK(j["valid"] == true);

    RunResult bad = run("validate", kInvalid);
    CHECK(bad.exit_code == 1);
    Json jb = Json::parse(bad.out);
    CHECK(jb["valid"] == false);
    CHECK(jb["certificate"]["value"] == 0);
    CHECK(jb["certificate"]["subset"] == Json::array({1, 2}));
    CHECK(jb["certificate"]["multi_index"] == Json::array({1, 1}));
}

TEST_CASE("malformed input and usage errors") {
    CHECK(run("validate", "{not json").exit_code == 2);
    CHECK(run("no-such-command", kHirzebruch).exit_code == 2);
    CHECK(run("validate --file /nonexistent/path.json").exit_code == 2);
    CHECK(run("").exit_code == 2);  // a subcommand is required
}

TEST_CASE("--file can precede or follow the subcommand") {
    const auto p = write_temp("qtlab_cli_m.json", kHirzebruch);
    CHECK(run("--file " + p.string() + " validate").exit_code == 0);
    CHECK(run("validate --file " + p.string()).exit_code == 0);
}

TEST_CASE("minors lists every multi-index and subset") {
    Json j = Json::parse(run("minors", kHirzebruch).out);
    REQUIRE(j["minors"].size() == 3);  // 1 multi-index, 3 nonempty subsets
    for (const Json& rec : j["minors"]) CHECK(rec["value"] == 1);
}

TEST_CASE("normalize") {
    RunResult r = run("normalize", R"({"shape":[1,1],"mode":"int",)"
                                   R"("blocks":[[[1],[1]],[[-2],[-1]]]})");
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["matrix"]["blocks"] == Json::parse("[[[1],[-1]],[[-2],[1]]]"));
    REQUIRE(j["flips"].size() == 1);
    CHECK(j["flips"][0]["column"] == 2);
    // feeding the output back is a no-op
    RunResult again = run("normalize", j["matrix"].dump());
    CHECK(Json::parse(again.out)["flips"].empty());
}

TEST_CASE("classify") {
    Json uni = Json::parse(run("classify", kHirzebruch).out);
    CHECK(uni["status"] == "unipotent");
    CHECK(uni["sigma"] == Json::array({1, 2}));
    CHECK(uni["normal_form"]["blocks"] == Json::parse("[[[1],[3]],[[0],[1]]]"));

    RunResult cyc = run("classify", kCyclic);
    CHECK(cyc.exit_code == 0);
    Json jc = Json::parse(cyc.out);
    CHECK(jc["status"] == "cyclic");
    CHECK(jc["certificates"]["cyclic_components"].size() == 2);

    RunResult inv = run("classify", kInvalid);
    CHECK(inv.exit_code == 1);
    CHECK(Json::parse(inv.out)["status"] == "invalid");
}

TEST_CASE("tower") {
    Json j = Json::parse(run("tower", kHirzebruch).out);
    REQUIRE(j["stages"].size() == 2);
    CHECK(j["stages"][0]["fiber_dim"] == 1);
    CHECK(j["stages"][1]["exponents"] == Json::parse("[[3]]"));
}

TEST_CASE("cohomology and betti") {
    Json j = Json::parse(run("cohomology", kHirzebruch).out);
    CHECK(j["ranks"] == Json::array({1, 2, 1}));
    CHECK(j["degree_scale"] == 2);
    CHECK(j["relations"].size() == 2);

    Json jb = Json::parse(run("betti", kHirzebruch).out);
    CHECK(jb["ranks"] == Json::array({1, 2, 1}));

    // gf2 mode: same ranks, degree scale 1
    Json jg = Json::parse(run("--gf2 betti", kHirzebruch).out);
    CHECK(jg["ranks"] == Json::array({1, 2, 1}));
}

TEST_CASE("restrict") {
    RunResult r = run("restrict --factor 1", kHirzebruch);
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["ranks"] == Json::array({1, 1}));
    CHECK(j["matrix"]["shape"] == Json::array({1}));
    CHECK(run("restrict", kHirzebruch).exit_code == 2);  // --factor required
}

TEST_CASE("nilpotent-search") {
    RunResult r = run("nilpotent-search --degree 1", kHirzebruch);
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["exhaustive"] == true);
    REQUIRE(j["witnesses"].size() == 2);
    CHECK(j["witnesses"][0] == Json::array({1, 0}));
    // 2/3 serialized as a fraction string
    CHECK(j["witnesses"][1] == Json::parse(R"([1,"2/3"])"));

    RunResult none = run("nilpotent-search --degree 1", kCyclic);
    CHECK(none.exit_code == 1);
    CHECK(Json::parse(none.out)["witnesses"].empty());
}

TEST_CASE("product-search") {
    RunResult found = run("product-search", kHirzebruch);
    CHECK(found.exit_code == 0);
    Json j = Json::parse(found.out);
    CHECK(j["status"] == "found");
    REQUIRE(j["witness"].size() == 2);

    RunResult dis = run("product-search", kCyclic);
    CHECK(dis.exit_code == 1);
    Json jd = Json::parse(dis.out);
    CHECK(jd["status"] == "disproved");
    CHECK(jd.contains("certificate"));
}

TEST_CASE("height override via the environment") {
    // the bounded (>2 factor) path reports the height in use; QTLAB_HEIGHT
    // changes the default
    const char* id3 = R"({"shape":[1,1,1],"mode":"int",)"
                      R"("blocks":[[[1],[0],[0]],[[0],[1],[0]],[[0],[0],[1]]]})";
    const auto p = write_temp("qtlab_cli_id3.json", id3);
    std::string cmd = "env QTLAB_HEIGHT=2 " + cli_path() + " --file " + p.string() +
                      " nilpotent-search --degree 1 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    pclose(pipe);
    CHECK(Json::parse(out)["height"] == 2);
}

TEST_CASE("isotropy") {
    RunResult r = run("isotropy --pattern [[1],[1]]", kCyclic);
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["trivial"] == true);
    CHECK(j["free_rank"] == 0);

    RunResult nt = run("isotropy --pattern [[1],[1]]", kInvalid);
    Json jn = Json::parse(nt.out);
    CHECK(jn["trivial"] == false);
    CHECK(jn["free_rank"] == 1);
}

TEST_CASE("census") {
    RunResult r = run("census --shape 1,1 --bound 2");
    CHECK(r.exit_code == 0);
    Json j = Json::parse(r.out);
    CHECK(j["counts"]["valid"] == 13);
    CHECK(j["counts"]["cyclic"] == 4);
    CHECK_FALSE(j.contains("orbit_count"));

    Json jd = Json::parse(run("census --shape 1,1 --bound 2 --dedupe --jobs 2").out);
    CHECK(jd["counts"]["valid"] == 13);
    CHECK(jd["orbit_count"] == 7);

    // --out writes one representative file per orbit and implies --dedupe
    const auto dir = std::filesystem::temp_directory_path() / "qtlab_cli_census";
    std::filesystem::remove_all(dir);
    Json jo = Json::parse(run("census --shape 1,1 --bound 2 --out " + dir.string()).out);
    CHECK(jo["orbit_count"] == 7);
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        Json rep = Json::parse(std::ifstream(e.path()));
        CHECK(rep["shape"] == Json::array({1, 1}));
        ++files;
    }
    CHECK(files == 7);

    Json jg = Json::parse(run("--gf2 census --shape 1,1 --bound 1").out);
    CHECK(jg["mode"] == "gf2");
    CHECK(jg["counts"]["cyclic"] == 0);

    CHECK(run("census --bound 1").exit_code == 2);  // --shape required
}
