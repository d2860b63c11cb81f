#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// Exercises the shared-library surface only.
#include "tensorlab.h"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const char* kTinyEsd = R"({
    "experiment": "esd",
    "dims": [20, 24, 28],
    "ranks": [2, 2, 2],
    "omega": 12.0,
    "trials": 2,
    "base_seed": 5,
    "output_path": "capi_records.csv"
})";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("version and theory entry points") {
    unsetenv("TENSORLAB_SEED");
    CHECK(std::strlen(tl_version()) > 0);

    const int64_t dims[3] = {300, 500, 700};
    double mu = 0.0, sigma = 0.0;
    REQUIRE(tl_scales(dims, 3, 1500, 0, &mu, &sigma) == TL_OK);
    CHECK(mu == doctest::Approx(500.0 * 700.0 / 1500.0).epsilon(1e-13));
    CHECK(sigma == doctest::Approx(6.8313005106397338).epsilon(1e-13));
    CHECK(tl_scales(dims, 3, 1500, 7, &mu, &sigma) == TL_ERROR_INVALID);
    CHECK(std::strlen(tl_last_error()) > 0);

    double rho = 0.0, xi = 0.0, zeta = 0.0;
    REQUIRE(tl_spike_prediction(2.0, 1.0, &rho, &xi, &zeta) == TL_OK);
    CHECK(rho == 2.0);
    CHECK(xi == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(zeta == doctest::Approx(0.75).epsilon(1e-14));
    REQUIRE(tl_spike_prediction(0.5, 1.0, &rho, &xi, &zeta) == TL_OK);
    CHECK(std::isnan(xi));
    CHECK(zeta == 0.0);

    CHECK(tl_semicircle_pdf(0.0) == doctest::Approx(1.0 / 3.14159265358979).epsilon(1e-10));
    CHECK(tl_semicircle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));

    const int64_t ranks[3] = {2, 2, 2};
    double bound = 0.0;
    REQUIRE(tl_noise_contraction_bound(dims, ranks, 3, 0.01, 1.0, &bound) == TL_OK);
    CHECK(bound > 0.0);
    CHECK(tl_noise_contraction_bound(dims, ranks, 3, 2.0, 1.0, &bound) == TL_ERROR_INVALID);
}

TEST_CASE("config lifecycle and error mapping") {
    unsetenv("TENSORLAB_SEED");
    CHECK(tl_config_parse("{ bad json") == nullptr);
    CHECK(std::strlen(tl_last_error()) > 0);
    CHECK(tl_config_parse(R"({"experiment": "esd", "dims": [4], "ranks": [1], "zzz": 1})") ==
          nullptr);
    CHECK(tl_config_load("/no/such/file.json") == nullptr);

    tl_config* cfg = tl_config_parse(kTinyEsd);
    REQUIRE(cfg != nullptr);
    CHECK(std::string(tl_config_output_path(cfg)) == "capi_records.csv");
    CHECK(tl_config_set_output(cfg, "other.csv") == TL_OK);
    CHECK(std::string(tl_config_output_path(cfg)) == "other.csv");
    CHECK(tl_config_set_profile(cfg, "gigantic") == TL_ERROR_CONFIG);
    tl_config_free(cfg);
}

TEST_CASE("environment seed is honored with setter precedence") {
    setenv("TENSORLAB_SEED", "909", 1);
    tl_config* cfg = tl_config_parse(kTinyEsd);
    REQUIRE(cfg != nullptr);
    unsetenv("TENSORLAB_SEED");
    tl_config* plain = tl_config_parse(kTinyEsd);
    REQUIRE(plain != nullptr);

    tl_table* env_run = tl_run(cfg, 1);
    tl_table* plain_run = tl_run(plain, 1);
    REQUIRE(env_run != nullptr);
    REQUIRE(plain_run != nullptr);
    // Seeds differ, so the seed column text must differ on the first row.
    const std::string env_seed = tl_table_text(env_run, 0, 1);
    const std::string plain_seed = tl_table_text(plain_run, 0, 1);
    CHECK(env_seed != plain_seed);
    tl_table_free(env_run);
    tl_table_free(plain_run);

    // The explicit setter overrides the environment value.
    CHECK(tl_config_set_seed(cfg, 5) == TL_OK);
    tl_table* reset_run = tl_run(cfg, 1);
    tl_table* base_run = tl_run(plain, 1);
    REQUIRE(reset_run != nullptr);
    const std::string a = tl_table_text(reset_run, 0, 1);
    const std::string b = tl_table_text(base_run, 0, 1);
    CHECK(a == b);
    tl_table_free(reset_run);
    tl_table_free(base_run);
    tl_config_free(cfg);
    tl_config_free(plain);
}

TEST_CASE("run, table access, CSV output and the gate") {
    unsetenv("TENSORLAB_SEED");
    tl_config* cfg = tl_config_parse(kTinyEsd);
    REQUIRE(cfg != nullptr);
    tl_table* table = tl_run(cfg, 2);
    REQUIRE(table != nullptr);

    const int64_t rows = tl_table_rows(table);
    const int cols = tl_table_cols(table);
    CHECK(rows == 2 * 3 * (40 + 4));
    CHECK(cols == 14);
    CHECK(std::string(tl_table_column(table, 0)) == "trial");
    CHECK(tl_table_column(table, 99) == nullptr);

    // Histogram rows have an n/a direction and numeric empirical density.
    int c_dir = -1, c_emp = -1;
    for (int j = 0; j < cols; ++j) {
        if (std::string(tl_table_column(table, j)) == "direction") c_dir = j;
        if (std::string(tl_table_column(table, j)) == "empirical") c_emp = j;
    }
    REQUIRE(c_dir >= 0);
    CHECK(tl_table_cell_is_na(table, 0, c_dir) == 1);
    CHECK(std::isnan(tl_table_value(table, 0, c_dir)));
    CHECK(!std::isnan(tl_table_value(table, 0, c_emp)));
    CHECK(std::string(tl_table_text(table, 0, c_dir)) == "n/a");

    const char* path = "capi_test_out.csv";
    REQUIRE(tl_table_write_csv(table, path) == TL_OK);
    const std::string body = read_file(path);
    CHECK(body.rfind("trial,seed,mode,kind,", 0) == 0);
    CHECK(std::count(body.begin(), body.end(), '\n') == rows + 1);
    std::remove(path);

    int passed = -1;
    const char* report = nullptr;
    REQUIRE(tl_table_check(table, cfg, &passed, &report) == TL_OK);
    CHECK((passed == 0 || passed == 1));
    CHECK(std::string(report).find("KS") != std::string::npos);

    tl_table_free(table);
    tl_config_free(cfg);
}

TEST_CASE("predict without a config") {
    const int64_t dims[3] = {100, 200, 300};
    const int64_t ranks[3] = {3, 4, 5};
    const double s_sq[2] = {4.08248290463863, 8.16496580927726};
    tl_table* table = tl_predict(dims, 3, ranks, 3, 0, s_sq, 2, 0.01, 1.0);
    REQUIRE(table != nullptr);
    CHECK(tl_table_rows(table) == 3 + 2 + 1);
    // N defaults to the sum of dims: sigma = sqrt(100*200*300)/600.
    int c_sigma = -1;
    for (int j = 0; j < tl_table_cols(table); ++j) {
        if (std::string(tl_table_column(table, j)) == "sigma") c_sigma = j;
    }
    REQUIRE(c_sigma >= 0);
    CHECK(tl_table_value(table, 0, c_sigma) == doctest::Approx(4.08248290463863).epsilon(1e-12));
    tl_table_free(table);

    CHECK(tl_predict(nullptr, 0, nullptr, 0, 0, nullptr, 0, 0.01, 1.0) == nullptr);
}
