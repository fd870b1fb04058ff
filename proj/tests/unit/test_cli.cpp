#include "horocount/cli.hpp"
#include "horocount/manifest.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace horocount;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp_path(const std::string& name) {
    return (std::filesystem::path(HOROCOUNT_TEST_TMP) / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Drops the named CSV column (used for wall-clock timings).
std::string drop_column(const std::string& csv, const std::string& column) {
    std::istringstream in(csv);
    std::string line, out;
    int drop = -1;
    bool header = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (header) {
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (cells[i] == column) drop = static_cast<int>(i);
            header = false;
        }
        for (std::size_t i = 0; i < cells.size(); ++i)
            if (static_cast<int>(i) != drop) out += cells[i] + ",";
        out += "\n";
    }
    return out;
}

} // namespace

TEST_CASE("constant subcommand emits the coefficient") {
    const auto r = run({"constant", "--n", "3", "--blocks", "1,1,1", "--json"});
    REQUIRE(r.code == cli::kOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("c").get<double>() == doctest::Approx(3.0060113388791336).epsilon(1e-12));
    CHECK(j.at("p").get<double>() == doctest::Approx(0.5));
    CHECK(j.contains("q"));
    CHECK(j.at("components").contains("volK"));
}

TEST_CASE("classify subcommand") {
    auto r = run({"classify", "--n", "2", "--blocks", "1,1", "--b-behavior", "zero"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find(R"({"nondivergent":false})") != std::string::npos);
    r = run({"classify", "--n", "2", "--blocks", "1,1", "--b-behavior", "infinity,one"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find(R"("coarse_partition":[2])") != std::string::npos);
    r = run({"classify", "--n", "2", "--blocks", "1,1", "--a-behavior", "unbounded,identity", "--b-behavior", "one"});
    CHECK(r.code == cli::kValidation);
}

TEST_CASE("count subcommand cross-checks at a small radius") {
    const auto r = run({"count", "--n", "2", "--blocks", "1,1", "--radius", "0.1", "--method", "both"});
    REQUIRE(r.code == cli::kOk);
    CHECK(r.out.find("R,count,asymptotic,ratio,method,margin,depth,seconds") != std::string::npos);
    CHECK(r.out.find("0.10000000000000001,2,") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({"frobnicate"}).code == cli::kUnknownSubcommand);
    CHECK(run({"constant", "--n", "3", "--blocks", "2,2"}).code == cli::kValidation);
    CHECK(run({"constant", "--n", "3", "--blocks", "3"}).code == cli::kValidation);
    CHECK(run({"volume", "--n", "2", "--blocks", "1,1", "--radius", "1", "--mc", "10", "--grid", "0.1"}).code ==
          cli::kValidation);
    CHECK(run({"count", "--n", "3", "--blocks", "1,1,1", "--radius", "2", "--max-states", "20"}).code ==
          cli::kResource);
}

TEST_CASE("thread count falls back to the environment") {
    CHECK(cli::thread_count(3) == 3);
    ::setenv("HOROCOUNT_THREADS", "5", 1);
    CHECK(cli::thread_count(0) == 5);
    ::unsetenv("HOROCOUNT_THREADS");
    CHECK(cli::thread_count(0) >= 1);
}

TEST_CASE("manifests reproduce volume runs") {
    const auto csv = tmp_path("cli_volume.csv");
    const std::vector<std::string> args{"volume", "--n", "3", "--blocks", "2,1", "--radius", "2,3",
                                        "--mc", "20000", "--seed", "17", "--csv", csv};
    REQUIRE(run(args).code == cli::kOk);
    const auto first = slurp(csv);
    CHECK(first.rfind("R,region,method,estimate,error,samples,grid_step,seed,closed_form,ratio", 0) == 0);
    const auto manifest = RunManifest::read(manifest_path_for(csv));
    CHECK(manifest.subcommand == "volume");
    REQUIRE(manifest.seed.has_value());
    CHECK(*manifest.seed == 17);
    CHECK(manifest.outputs == std::vector<std::string>{csv});
    REQUIRE(run(manifest.argv).code == cli::kOk);
    CHECK(slurp(csv) == first);
}

TEST_CASE("manifests reproduce count runs") {
    const auto csv = tmp_path("cli_count.csv");
    REQUIRE(run({"count", "--n", "2", "--blocks", "1,1", "--radius", "1,2", "--csv", csv}).code == cli::kOk);
    const auto first = slurp(csv);
    const auto manifest = RunManifest::read(manifest_path_for(csv));
    REQUIRE(run(manifest.argv).code == cli::kOk);
    CHECK(drop_column(slurp(csv), "seconds") == drop_column(first, "seconds"));
}
