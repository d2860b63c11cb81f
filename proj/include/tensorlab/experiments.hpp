#pragma once

#include "tensorlab/decomposition.hpp"
#include "tensorlab/rmt.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace tensorlab {

/// Invalid or inconsistent experiment configuration (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { esd, alignment_sweep, hooi_scaling, predict };

enum class NConvention { sum_dims, first_dim, custom };

/// Flat, JSON-backed experiment description. Unknown keys are rejected.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::esd;
    std::vector<Index> dims;
    std::vector<Index> ranks;
    NConvention n_convention = NConvention::sum_dims;
    Index n_param = 0;  // used when n_convention == custom
    double omega = 0.0;
    std::vector<double> omega_grid;
    std::vector<Index> n_grid;
    int trials = 10;
    std::uint64_t base_seed = 1;
    double tol = 1e-8;
    int max_iter = 100;
    double epsilon_outlier = 0.3;
    double c_universal = 1.0;
    double delta = 0.01;
    std::vector<double> s_sq;
    std::string output_path = "records.csv";

    Index resolved_n() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& cfg);

/// Overrides dims (and the N grid for the scaling experiment) with the
/// "small" CI preset or the paper-scale preset.
void apply_profile(ExperimentConfig& cfg, const std::string& profile);

/// TENSORLAB_SEED, when set, overrides base_seed. Precedence is
/// CLI flag > environment > config file.
void apply_env_overrides(ExperimentConfig& cfg);

/// One CSV cell: a double, a verbatim string (used for seeds and row kinds),
/// or n/a.
struct Cell {
    enum class Kind { number, text, na };
    Kind kind = Kind::na;
    double num = 0.0;
    std::string text;

    static Cell number_of(double v) { return Cell{Kind::number, v, {}}; }
    static Cell text_of(std::string s) { return Cell{Kind::text, 0.0, std::move(s)}; }
    static Cell na() { return Cell{}; }
};

struct RecordTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    int column(const std::string& name) const;  // -1 when absent
    const Cell& at(std::size_t row, const std::string& name) const;
};

/// RFC 4180 quoting, '.' decimal separator, 17 significant digits.
void write_csv(const RecordTable& table, std::ostream& os);
void write_csv_file(const RecordTable& table, const std::string& path);

/// Runs the configured experiment. Trials and grid points are distributed
/// over `threads` workers (0 = hardware concurrency); the output is
/// byte-identical for any worker count.
RecordTable run_experiment(const ExperimentConfig& cfg, int threads = 1);

RecordTable run_esd(const ExperimentConfig& cfg, int threads = 1);
RecordTable run_alignment_sweep(const ExperimentConfig& cfg, int threads = 1);
RecordTable run_hooi_scaling(const ExperimentConfig& cfg, int threads = 1);
RecordTable run_predict(const ExperimentConfig& cfg);

/// Theory-versus-simulation gate for a finished run (the CLI --check flag).
/// Tolerances are the paper-scale ones when min(dims) >= 250 and documented
/// relaxed ones otherwise.
struct GateReport {
    bool passed = true;
    std::string text;
};

GateReport evaluate_gate(const ExperimentConfig& cfg, const RecordTable& table);

}  // namespace tensorlab
