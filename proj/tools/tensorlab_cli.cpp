// Experiment driver for the tensorlab shared library. Talks to the library
// exclusively through the C interface in tensorlab.h.

#include "tensorlab.h"

#include <CLI11.hpp>

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGateFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

void print_table(tl_table* table) {
    const int cols = tl_table_cols(table);
    const int64_t rows = tl_table_rows(table);
    std::vector<std::size_t> width(static_cast<std::size_t>(cols), 0);
    for (int j = 0; j < cols; ++j) {
        width[static_cast<std::size_t>(j)] = std::string(tl_table_column(table, j)).size();
    }
    std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(rows));
    for (int64_t i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            std::string text = tl_table_text(table, i, j);
            if (text.size() > width[static_cast<std::size_t>(j)]) {
                width[static_cast<std::size_t>(j)] = text.size();
            }
            cells[static_cast<std::size_t>(i)].push_back(std::move(text));
        }
    }
    for (int j = 0; j < cols; ++j) {
        std::printf("%-*s ", static_cast<int>(width[static_cast<std::size_t>(j)]),
                    tl_table_column(table, j));
    }
    std::printf("\n");
    for (const auto& row : cells) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::printf("%-*s ", static_cast<int>(width[j]), row[j].c_str());
        }
        std::printf("\n");
    }
}

struct RunArgs {
    std::string config_path;
    std::string out_path;
    std::string profile;
    int threads = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool check = false;
};

int do_run(const RunArgs& args) {
    tl_config* cfg = tl_config_load(args.config_path.c_str());
    if (cfg == nullptr) {
        std::fprintf(stderr, "error: %s\n", tl_last_error());
        return kExitConfigError;
    }
    if (!args.profile.empty() && tl_config_set_profile(cfg, args.profile.c_str()) != TL_OK) {
        std::fprintf(stderr, "error: %s\n", tl_last_error());
        tl_config_free(cfg);
        return kExitConfigError;
    }
    if (args.seed_set) tl_config_set_seed(cfg, args.seed);
    if (!args.out_path.empty()) tl_config_set_output(cfg, args.out_path.c_str());

    tl_table* table = tl_run(cfg, args.threads);
    if (table == nullptr) {
        std::fprintf(stderr, "error: %s\n", tl_last_error());
        tl_config_free(cfg);
        return kExitRuntimeError;
    }
    const char* out = tl_config_output_path(cfg);
    if (tl_table_write_csv(table, out) != TL_OK) {
        std::fprintf(stderr, "error: %s\n", tl_last_error());
        tl_table_free(table);
        tl_config_free(cfg);
        return kExitRuntimeError;
    }
    std::printf("wrote %" PRId64 " records to %s\n", tl_table_rows(table), out);

    int exit_code = kExitOk;
    if (args.check) {
        int passed = 0;
        const char* report = nullptr;
        if (tl_table_check(table, cfg, &passed, &report) != TL_OK) {
            std::fprintf(stderr, "error: %s\n", tl_last_error());
            exit_code = kExitRuntimeError;
        } else {
            std::printf("theory-vs-simulation gate:\n%s", report);
            std::printf(passed ? "check: PASS\n" : "check: FAIL\n");
            if (!passed) exit_code = kExitGateFailed;
        }
    }
    tl_table_free(table);
    tl_config_free(cfg);
    return exit_code;
}

struct PredictArgs {
    std::vector<std::int64_t> dims;
    std::vector<std::int64_t> ranks;
    std::int64_t n_param = 0;
    std::vector<double> s_sq;
    double delta = 0.01;
    double c_universal = 1.0;
    std::string out_path;
};

int do_predict(const PredictArgs& args) {
    tl_table* table = tl_predict(args.dims.data(), static_cast<int>(args.dims.size()),
                                 args.ranks.empty() ? nullptr : args.ranks.data(),
                                 static_cast<int>(args.ranks.size()), args.n_param,
                                 args.s_sq.empty() ? nullptr : args.s_sq.data(),
                                 static_cast<int>(args.s_sq.size()), args.delta, args.c_universal);
    if (table == nullptr) {
        std::fprintf(stderr, "error: %s\n", tl_last_error());
        return kExitConfigError;
    }
    print_table(table);
    int exit_code = kExitOk;
    if (!args.out_path.empty() && tl_table_write_csv(table, args.out_path.c_str()) != TL_OK) {
        std::fprintf(stderr, "error: %s\n", tl_last_error());
        exit_code = kExitRuntimeError;
    }
    tl_table_free(table);
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spiked tensor experiments: truncated MLSVD, HOOI and their "
                 "random-matrix predictions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tl_version());

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Run a config-driven Monte-Carlo experiment");
    run->add_option("--config", run_args.config_path, "JSON experiment config")->required();
    run->add_option("--out", run_args.out_path, "CSV output path (overrides the config)");
    run->add_option("--profile", run_args.profile, "Dimension preset: small or paper");
    run->add_option("--threads", run_args.threads, "Worker count (0 = all cores)");
    auto* seed_opt = run->add_option("--seed", run_args.seed,
                                     "Base seed (overrides TENSORLAB_SEED and the config)");
    run->add_flag("--check", run_args.check, "Evaluate the theory-vs-simulation gate");

    PredictArgs predict_args;
    auto* predict = app.add_subcommand("predict", "Print closed-form predictions, no simulation");
    predict->add_option("--dims", predict_args.dims, "Tensor dimensions, e.g. 300,500,700")
        ->required()
        ->delimiter(',');
    predict->add_option("--ranks", predict_args.ranks, "Multilinear rank, e.g. 3,4,5")
        ->delimiter(',');
    predict->add_option("--n", predict_args.n_param, "Size parameter N (default: sum of dims)");
    predict->add_option("--s2", predict_args.s_sq, "Squared signal singular values")
        ->delimiter(',');
    predict->add_option("--delta", predict_args.delta, "Failure probability for the noise bound");
    predict->add_option("--c", predict_args.c_universal, "Universal constant for the noise bound");
    predict->add_option("--out", predict_args.out_path, "Also write the table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    run_args.seed_set = seed_opt->count() > 0;
    if (run->parsed()) return do_run(run_args);
    return do_predict(predict_args);
}
