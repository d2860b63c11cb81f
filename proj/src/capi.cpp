#include "tensorlab.h"

#include "tensorlab/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <string>

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what != nullptr ? what : "unknown error"; }

template <class F>
tl_status guarded(F&& f) {
    try {
        f();
        return TL_OK;
    } catch (const tensorlab::ConfigError& e) {
        set_error(e.what());
        return TL_ERROR_CONFIG;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return TL_ERROR_INVALID;
    } catch (const std::exception& e) {
        set_error(e.what());
        return TL_ERROR_RUNTIME;
    }
}

std::vector<tensorlab::Index> to_index_vector(const int64_t* data, int len) {
    if (data == nullptr || len < 1) throw std::invalid_argument("null or empty array");
    return std::vector<tensorlab::Index>(data, data + len);
}

}  // namespace

struct tl_config {
    tensorlab::ExperimentConfig cfg;
};

struct tl_table {
    tensorlab::RecordTable table;
    std::string text_scratch;
    std::string check_report;
};

extern "C" {

const char* tl_version(void) { return "0.1.0"; }

const char* tl_last_error(void) { return g_last_error.c_str(); }

tl_status tl_scales(const int64_t* dims, int order, int64_t n_param, int mode, double* mu_out,
                    double* sigma_out) {
    return guarded([&] {
        if (mu_out == nullptr || sigma_out == nullptr) {
            throw std::invalid_argument("null output pointer");
        }
        const auto d = to_index_vector(dims, order);
        const auto s = tensorlab::scales(d, n_param, mode);
        *mu_out = s.mu;
        *sigma_out = s.sigma;
    });
}

tl_status tl_spike_prediction(double s_sq, double sigma, double* rho_out, double* xi_out,
                              double* zeta_plus_out) {
    return guarded([&] {
        if (rho_out == nullptr || xi_out == nullptr || zeta_plus_out == nullptr) {
            throw std::invalid_argument("null output pointer");
        }
        const auto p = tensorlab::spike_prediction(s_sq, sigma);
        *rho_out = p.rho;
        *xi_out = p.xi ? *p.xi : std::nan("");
        *zeta_plus_out = p.zeta_plus;
    });
}

double tl_semicircle_pdf(double x) { return tensorlab::semicircle_pdf(x); }

double tl_semicircle_cdf(double x) { return tensorlab::semicircle_cdf(x); }

tl_status tl_noise_contraction_bound(const int64_t* dims, const int64_t* ranks, int order,
                                     double delta, double c_universal, double* bound_out) {
    return guarded([&] {
        if (bound_out == nullptr) throw std::invalid_argument("null output pointer");
        const auto d = to_index_vector(dims, order);
        const auto r = to_index_vector(ranks, order);
        *bound_out = tensorlab::noise_contraction_bound(d, r, delta, c_universal);
    });
}

tl_config* tl_config_load(const char* path) {
    tl_config* out = nullptr;
    guarded([&] {
        if (path == nullptr) throw std::invalid_argument("null path");
        auto cfg = tensorlab::load_config(path);
        tensorlab::apply_env_overrides(cfg);
        out = new tl_config{std::move(cfg)};
    });
    return out;
}

tl_config* tl_config_parse(const char* json_text) {
    tl_config* out = nullptr;
    guarded([&] {
        if (json_text == nullptr) throw std::invalid_argument("null config text");
        auto cfg = tensorlab::parse_config(json_text);
        tensorlab::apply_env_overrides(cfg);
        out = new tl_config{std::move(cfg)};
    });
    return out;
}

void tl_config_free(tl_config* cfg) { delete cfg; }

tl_status tl_config_set_seed(tl_config* cfg, uint64_t seed) {
    return guarded([&] {
        if (cfg == nullptr) throw std::invalid_argument("null config");
        cfg->cfg.base_seed = seed;
    });
}

tl_status tl_config_set_profile(tl_config* cfg, const char* profile) {
    return guarded([&] {
        if (cfg == nullptr || profile == nullptr) throw std::invalid_argument("null argument");
        tensorlab::apply_profile(cfg->cfg, profile);
    });
}

tl_status tl_config_set_output(tl_config* cfg, const char* path) {
    return guarded([&] {
        if (cfg == nullptr || path == nullptr) throw std::invalid_argument("null argument");
        cfg->cfg.output_path = path;
    });
}

const char* tl_config_output_path(const tl_config* cfg) {
    return cfg == nullptr ? nullptr : cfg->cfg.output_path.c_str();
}

tl_table* tl_run(const tl_config* cfg, int threads) {
    tl_table* out = nullptr;
    guarded([&] {
        if (cfg == nullptr) throw std::invalid_argument("null config");
        out = new tl_table{tensorlab::run_experiment(cfg->cfg, threads), {}, {}};
    });
    return out;
}

tl_table* tl_predict(const int64_t* dims, int order, const int64_t* ranks, int ranks_len,
                     int64_t n_param, const double* s_sq, int s_sq_len, double delta,
                     double c_universal) {
    tl_table* out = nullptr;
    guarded([&] {
        tensorlab::ExperimentConfig cfg;
        cfg.experiment = tensorlab::ExperimentKind::predict;
        cfg.dims = to_index_vector(dims, order);
        if (ranks != nullptr && ranks_len > 0) cfg.ranks = to_index_vector(ranks, ranks_len);
        if (n_param > 0) {
            cfg.n_convention = tensorlab::NConvention::custom;
            cfg.n_param = n_param;
        }
        if (s_sq != nullptr && s_sq_len > 0) cfg.s_sq.assign(s_sq, s_sq + s_sq_len);
        cfg.delta = delta;
        cfg.c_universal = c_universal;
        out = new tl_table{tensorlab::run_predict(cfg), {}, {}};
    });
    return out;
}

void tl_table_free(tl_table* table) { delete table; }

int64_t tl_table_rows(const tl_table* table) {
    return table == nullptr ? 0 : static_cast<int64_t>(table->table.rows.size());
}

int tl_table_cols(const tl_table* table) {
    return table == nullptr ? 0 : static_cast<int>(table->table.columns.size());
}

const char* tl_table_column(const tl_table* table, int col) {
    if (table == nullptr || col < 0 || col >= tl_table_cols(table)) return nullptr;
    return table->table.columns[static_cast<std::size_t>(col)].c_str();
}

namespace {

const tensorlab::Cell* cell_at(const tl_table* table, int64_t row, int col) {
    if (table == nullptr || row < 0 || col < 0) return nullptr;
    if (row >= tl_table_rows(table) || col >= tl_table_cols(table)) return nullptr;
    return &table->table.rows[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
}

}  // namespace

int tl_table_cell_is_na(const tl_table* table, int64_t row, int col) {
    const auto* cell = cell_at(table, row, col);
    return cell == nullptr || cell->kind == tensorlab::Cell::Kind::na ? 1 : 0;
}

double tl_table_value(const tl_table* table, int64_t row, int col) {
    const auto* cell = cell_at(table, row, col);
    if (cell == nullptr || cell->kind != tensorlab::Cell::Kind::number) return std::nan("");
    return cell->num;
}

const char* tl_table_text(tl_table* table, int64_t row, int col) {
    const auto* cell = cell_at(table, row, col);
    if (table == nullptr || cell == nullptr) return nullptr;
    switch (cell->kind) {
        case tensorlab::Cell::Kind::number: {
            char buf[64];
            const auto res =
                std::to_chars(buf, buf + sizeof(buf), cell->num, std::chars_format::general, 17);
            table->text_scratch.assign(buf, res.ptr);
            break;
        }
        case tensorlab::Cell::Kind::text:
            table->text_scratch = cell->text;
            break;
        case tensorlab::Cell::Kind::na:
            table->text_scratch = "n/a";
            break;
    }
    return table->text_scratch.c_str();
}

tl_status tl_table_write_csv(const tl_table* table, const char* path) {
    return guarded([&] {
        if (table == nullptr || path == nullptr) throw std::invalid_argument("null argument");
        tensorlab::write_csv_file(table->table, path);
    });
}

tl_status tl_table_check(tl_table* table, const tl_config* cfg, int* passed_out,
                         const char** report_out) {
    return guarded([&] {
        if (table == nullptr || cfg == nullptr || passed_out == nullptr || report_out == nullptr) {
            throw std::invalid_argument("null argument");
        }
        const auto report = tensorlab::evaluate_gate(cfg->cfg, table->table);
        table->check_report = report.text;
        *passed_out = report.passed ? 1 : 0;
        *report_out = table->check_report.c_str();
    });
}

}  // extern "C"
