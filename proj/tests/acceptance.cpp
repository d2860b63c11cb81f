// Acceptance suite: end-to-end theory-versus-simulation checks at the
// settings of the reference figures, plus the exact property suites. Each
// criterion prints one PASS/FAIL line; the process exits non-zero if any
// criterion fails.

#include "tensorlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

using namespace tensorlab;

namespace {

int g_failures = 0;

void report(int id, bool passed, const std::string& label, const std::string& detail) {
    if (!passed) ++g_failures;
    std::printf("[%s] criterion %d: %s  --  %s\n", passed ? "PASS" : "FAIL", id, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
}

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

// ---------------------------------------------------------------------
// Criteria 1-4 share one run: spectra of the unfoldings at the
// (300, 500, 700), N = 1500, ranks (3, 4, 5), omega = 15 setting, 10 seeds.
// ---------------------------------------------------------------------

struct EsdData {
    ExperimentConfig cfg;
    RecordTable table;
    double seconds = 0.0;
};

EsdData run_reference_esd() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::esd;
    cfg.dims = {300, 500, 700};
    cfg.ranks = {3, 4, 5};
    cfg.n_convention = NConvention::sum_dims;
    cfg.omega = 15.0;
    cfg.trials = 10;
    cfg.base_seed = 149;
    cfg.epsilon_outlier = 0.3;
    const double t0 = now_seconds();
    RecordTable table = run_esd(cfg, 0);
    return EsdData{std::move(cfg), std::move(table), now_seconds() - t0};
}

void criterion_1(const EsdData& data) {
    const RecordTable& t = data.table;
    const int c_trial = t.column("trial"), c_mode = t.column("mode"), c_kind = t.column("kind"),
              c_dir = t.column("direction"), c_ks = t.column("ks_bulk");
    double worst = 0.0;
    for (int mode = 1; mode <= 3; ++mode) {
        double sum = 0.0;
        int n = 0;
        for (const auto& r : t.rows) {
            if (r[c_kind].text != "spike_position" || r[c_dir].num != 1.0) continue;
            if (r[c_mode].num != mode || r[c_trial].num >= 5.0) continue;
            sum += r[c_ks].num;
            ++n;
        }
        worst = std::max(worst, sum / n);
    }
    std::ostringstream detail;
    detail << "worst per-mode mean KS over 5 seeds = " << worst << " (< 0.05); shared 10-seed run took "
           << static_cast<int>(data.seconds) << " s";
    report(1, worst < 0.05, "bulk ESD follows the stretched semicircle", detail.str());
}

void criterion_2(const EsdData& data) {
    const RecordTable& t = data.table;
    const int c_kind = t.column("kind"), c_rho = t.column("rho"), c_emp = t.column("empirical"),
              c_th = t.column("theoretical");
    int ok = 0, total = 0;
    double worst = 0.0;
    for (const auto& r : t.rows) {
        if (r[c_kind].text != "spike_position") continue;
        if (r[c_rho].kind != Cell::Kind::number || r[c_rho].num <= 1.2) continue;
        if (r[c_th].kind != Cell::Kind::number) continue;
        const double err = std::abs(r[c_emp].num - r[c_th].num);
        worst = std::max(worst, err);
        ++total;
        if (err <= 0.15) ++ok;
    }
    std::ostringstream detail;
    detail << ok << "/" << total << " (direction, seed) pairs within 0.15 of xi (need >= 90%); worst err "
           << worst;
    report(2, total > 0 && ok * 10 >= total * 9, "spike positions match rho + 1/rho", detail.str());
}

void criterion_3(const EsdData& data) {
    const RecordTable& t = data.table;
    const int c_kind = t.column("kind"), c_rho = t.column("rho"), c_emp = t.column("empirical"),
              c_th = t.column("theoretical");
    int ok = 0, total = 0;
    double worst = 0.0;
    for (const auto& r : t.rows) {
        if (r[c_kind].text != "spike_alignment") continue;
        if (r[c_rho].kind != Cell::Kind::number || r[c_rho].num <= 1.2) continue;
        const double err = std::abs(r[c_emp].num - r[c_th].num);
        worst = std::max(worst, err);
        ++total;
        if (err <= 0.07) ++ok;
    }
    std::ostringstream detail;
    detail << ok << "/" << total << " pairs within 0.07 of zeta+ (need >= 90%); worst err " << worst;
    report(3, total > 0 && ok * 10 >= total * 9, "spike eigenvectors align at 1 - 1/rho^2",
           detail.str());
}

void criterion_4(const EsdData& data) {
    const RecordTable& t = data.table;
    const int c_mode = t.column("mode"), c_kind = t.column("kind"), c_dir = t.column("direction"),
              c_rho = t.column("rho"), c_oe = t.column("outliers_emp"),
              c_op = t.column("outliers_pred");
    int match = 0, total = 0;
    double pred = 0.0;
    std::vector<double> rhos;
    for (const auto& r : t.rows) {
        if (r[c_mode].num != 3.0 || r[c_kind].text != "spike_position") continue;
        if (r[c_dir].num == 1.0) {
            ++total;
            if (r[c_oe].num == r[c_op].num) ++match;
            pred = r[c_op].num;
        }
        if (rhos.size() < 5) rhos.push_back(r[c_rho].num);
    }
    std::ostringstream detail;
    detail << "mode-3 outlier count above 2.3 equals #{rho > 1} = " << pred << " in " << match << "/"
           << total << " seeds (need >= 8); drawn rho = (";
    for (std::size_t q = 0; q < rhos.size(); ++q) detail << (q ? ", " : "") << rhos[q];
    detail << ")";
    bool passed = match >= 8;
    // The reference observation: the fifth direction stays in the bulk when
    // its SNR is subcritical.
    if (rhos.size() == 5 && rhos[4] < 1.0) {
        passed = passed && pred == 4.0;
        detail << "; rho_5 < 1 so exactly 4 spikes are expected, and observed";
    }
    report(4, passed, "phase transition / outlier count", detail.str());
}

// ---------------------------------------------------------------------
// Criterion 5: alignment sweep at (100, 200, 300), N = 600, 10 trials.
// ---------------------------------------------------------------------

void criterion_5() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::alignment_sweep;
    cfg.dims = {100, 200, 300};
    cfg.ranks = {3, 4, 5};
    cfg.n_convention = NConvention::sum_dims;
    cfg.omega_grid = {0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 13.0, 16.0, 20.0};
    cfg.trials = 10;
    cfg.base_seed = 3;
    const RecordTable t = run_alignment_sweep(cfg, 0);

    const int c_mode = t.column("mode"), c_omega = t.column("omega"),
              c_first = t.column("omega_first"), c_th = t.column("theory"),
              c_ml = t.column("mlsvd_mean"), c_ho = t.column("hooi_mean");
    double worst_mid = 0.0, worst_low = 0.0, worst_order = 1.0;
    double worst_order_omega = 0.0;
    int worst_order_mode = 0;
    for (const auto& r : t.rows) {
        const double omega = r[c_omega].num, first = r[c_first].num;
        const double ml = r[c_ml].num, ho = r[c_ho].num, th = r[c_th].num;
        if (omega >= 1.5 * first) worst_mid = std::max(worst_mid, std::abs(ml - th));
        if (omega <= 0.5 * first) worst_low = std::max(worst_low, ml);
        if (ho - ml < worst_order) {
            worst_order = ho - ml;
            worst_order_omega = omega;
            worst_order_mode = static_cast<int>(r[c_mode].num);
        }
    }
    std::ostringstream detail;
    detail << "MLSVD vs theory above 1.5x transition: worst |err| = " << worst_mid
           << " (<= 0.08); below 0.5x transition: worst alignment = " << worst_low
           << " (< 0.1); min(HOOI - MLSVD) over grid = " << worst_order << " at mode "
           << worst_order_mode << ", omega = " << worst_order_omega << " (>= 0)";
    report(5, worst_mid <= 0.08 && worst_low < 0.1 && worst_order >= 0.0,
           "alignment sweep matches theory and HOOI dominates MLSVD", detail.str());
}

// ---------------------------------------------------------------------
// Criterion 6: HOOI first-iteration behavior along growing N.
// ---------------------------------------------------------------------

std::vector<double> ranks_avg(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> rk(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) rk[order[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
        i = j + 1;
    }
    return rk;
}

double spearman_corr(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto rx = ranks_avg(xs), ry = ranks_avg(ys);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= rx.size();
    my /= ry.size();
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxx == 0 || syy == 0 ? 0.0 : sxy / std::sqrt(sxx * syy);
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

void criterion_6() {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::hooi_scaling;
    cfg.dims = {1, 2, 3};
    cfg.ranks = {3, 4, 5};
    cfg.omega = 10.0;
    cfg.n_grid = {120, 240, 480, 960};
    cfg.trials = 10;
    cfg.base_seed = 7;
    const RecordTable t = run_hooi_scaling(cfg, 0);

    const int c_n = t.column("n_param"), c_mode = t.column("mode"),
              c_gap = t.column("rescaled_gap"), c_it = t.column("iterations");
    std::vector<double> ns, gaps;
    for (Index n : cfg.n_grid) {
        for (int mode = 1; mode <= 3; ++mode) {
            double sum = 0.0;
            int count = 0;
            for (const auto& r : t.rows) {
                if (r[c_n].num != static_cast<double>(n) || r[c_mode].num != mode) continue;
                sum += r[c_gap].num;
                ++count;
            }
            ns.push_back(static_cast<double>(n));
            gaps.push_back(sum / count);
        }
    }
    const double corr = spearman_corr(ns, gaps);

    auto iterations_at = [&](Index n) {
        std::vector<double> xs;
        for (const auto& r : t.rows) {
            if (r[c_n].num != static_cast<double>(n) || r[c_mode].num != 1.0) continue;
            xs.push_back(r[c_it].num);
        }
        return median(xs);
    };
    const double med_small = iterations_at(120), med_large = iterations_at(960);
    std::ostringstream detail;
    detail << "Spearman(N, (1 - alignment_1) sqrt(sigma)) = " << corr
           << " (<= 0.2); median iterations: N=120 -> " << med_small << ", N=960 -> " << med_large
           << " (non-increasing)";
    report(6, corr <= 0.2 && med_large <= med_small,
           "first HOOI iteration is asymptotically optimal", detail.str());
}

// ---------------------------------------------------------------------
// Criterion 7: quasi-optimality of truncated MLSVD against HOOI.
// ---------------------------------------------------------------------

void criterion_7() {
    const std::vector<Index> dims{20, 24, 18}, ranks{2, 3, 2};
    const Index n_param = 62;
    const double omegas[5] = {0.5, 2.0, 5.0, 10.0, 20.0};
    int sqrt3_ok = 0, hooi_ok = 0;
    const int instances = 50;
    for (int i = 0; i < instances; ++i) {
        Rng srng = Rng::derive(7000 + static_cast<std::uint64_t>(i), 0);
        const TuckerFactors signal = make_signal(dims, ranks, n_param, omegas[i % 5], srng);
        Rng nrng = Rng::derive(7000 + static_cast<std::uint64_t>(i), 1);
        const SpikedInstance inst = sample_observation(signal, n_param, nrng);
        const double err_mlsvd =
            reconstruction_error(inst.observed, truncated_mlsvd(inst.observed, ranks));
        const double err_hooi =
            reconstruction_error(inst.observed, hooi(inst.observed, ranks).factors);
        if (err_mlsvd <= std::sqrt(3.0) * err_hooi * (1.0 + 1e-12)) ++sqrt3_ok;
        if (err_hooi <= err_mlsvd * (1.0 + 1e-12)) ++hooi_ok;
    }
    std::ostringstream detail;
    detail << "err(MLSVD) <= sqrt(3) err(HOOI) in " << sqrt3_ok << "/" << instances
           << " (need 100%); err(HOOI) <= err(MLSVD) in " << hooi_ok << "/" << instances
           << " (need >= 95%)";
    report(7, sqrt3_ok == instances && hooi_ok * 100 >= instances * 95,
           "quasi-optimality of the first guess", detail.str());
}

// ---------------------------------------------------------------------
// Criterion 8: property suites with no paper numbers involved.
// ---------------------------------------------------------------------

DenseTensor random_tensor(std::vector<Index> shape, Rng& rng) {
    DenseTensor t(std::move(shape));
    rng.fill_gaussian({t.data(), static_cast<std::size_t>(t.size())});
    return t;
}

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.next_gaussian();
    }
    return m;
}

bool prop_roundtrip(std::string& why) {
    Rng rng(8001);
    for (const auto& shape : {std::vector<Index>{5, 4, 3}, {3, 2, 4, 2}, {2, 3, 2, 2, 3}}) {
        const DenseTensor t = random_tensor(shape, rng);
        for (Index l = 0; l < t.order(); ++l) {
            if (fold(unfold(t, l), l, t.shape()).values() != t.values()) {
                why = "fold(unfold) differed";
                return false;
            }
        }
    }
    return true;
}

bool prop_tucker_kron(std::string& why) {
    Rng rng(8002);
    const DenseTensor g = random_tensor({3, 2, 4}, rng);
    const Matrix u = random_matrix(6, 3, rng), v = random_matrix(5, 2, rng),
                 w = random_matrix(7, 4, rng);
    const DenseTensor t = tucker_to_full(g, std::vector<Matrix>{u, v, w});
    const Matrix lhs = unfold(t, 0);
    const Matrix rhs = u * unfold(g, 0) * kron(v, w).transpose();
    if ((lhs - rhs).cwiseAbs().maxCoeff() >= 1e-12) {
        why = "Tucker/Kronecker unfolding identity beyond 1e-12";
        return false;
    }
    return true;
}

bool prop_contract_oracle(std::string& why) {
    Rng rng(8003);
    const DenseTensor t = random_tensor({3, 3, 3}, rng);
    const std::vector<Matrix> mats{random_matrix(3, 2, rng), random_matrix(3, 3, rng),
                                   random_matrix(3, 2, rng)};
    const DenseTensor fast = contract(t, mats);
    // Nested-sum oracle.
    for (Index a = 0; a < 2; ++a) {
        for (Index b = 0; b < 3; ++b) {
            for (Index c = 0; c < 2; ++c) {
                double sum = 0.0;
                for (Index i = 0; i < 3; ++i) {
                    for (Index j = 0; j < 3; ++j) {
                        for (Index k = 0; k < 3; ++k) {
                            sum += t(i, j, k) * mats[0](i, a) * mats[1](j, b) * mats[2](k, c);
                        }
                    }
                }
                if (std::abs(fast(a, b, c) - sum) >= 1e-12) {
                    why = "contract differs from the nested-loop oracle";
                    return false;
                }
            }
        }
    }
    return true;
}

bool prop_hooi_monotone(std::string& why) {
    for (int i = 0; i < 50; ++i) {
        const double omega = 0.5 + 2.5 * (i % 8);
        Rng srng = Rng::derive(8100 + static_cast<std::uint64_t>(i), 0);
        const std::vector<Index> dims{16, 12, 14}, ranks{2, 3, 2};
        const TuckerFactors signal = make_signal(dims, ranks, 42, omega, srng);
        Rng nrng = Rng::derive(8100 + static_cast<std::uint64_t>(i), 1);
        const SpikedInstance inst = sample_observation(signal, 42, nrng);
        const HooiReport rep = hooi(inst.observed, ranks);
        for (std::size_t s = 1; s < rep.objective_trace.size(); ++s) {
            if (rep.objective_trace[s] < rep.objective_trace[s - 1] * (1.0 - 1e-9)) {
                why = "objective decreased beyond 1e-9 relative";
                return false;
            }
        }
    }
    return true;
}

bool prop_stieltjes(std::string& why) {
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            const double re = -6.0 + 12.0 * i / 99;
            double im = -4.0 + 8.0 * j / 99;
            if (std::abs(im) < 0.04) im = im >= 0 ? 0.05 : -0.05;
            const std::complex<double> z(re, im);
            const std::complex<double> m = stieltjes_sc(z);
            if (std::abs(m * m + z * m + 1.0) > 1e-12 || z.imag() * m.imag() <= 0.0) {
                why = "Stieltjes residual or branch violated";
                return false;
            }
        }
    }
    return true;
}

bool prop_principal_angles(std::string& why) {
    Rng rng(8004);
    for (int rep = 0; rep < 2; ++rep) {
        const OrthonormalBasis x = orthonormalize(random_matrix(5, 2, rng));
        const OrthonormalBasis u = orthonormalize(random_matrix(5, 2, rng));
        const auto angles = principal_angles(x, u);
        // Recursive-definition oracle on the 2-dimensional spans.
        const Matrix cross = x.matrix().transpose() * u.matrix();
        const double two_pi = 2.0 * std::numbers::pi;
        double best = -2.0, bphi = 0.0, bpsi = 0.0;
        const int grid = 3000;
        for (int i = 0; i < grid; ++i) {
            for (int j = 0; j < grid; ++j) {
                const Eigen::Vector2d a(std::cos(two_pi * i / grid), std::sin(two_pi * i / grid));
                const Eigen::Vector2d b(std::cos(two_pi * j / grid), std::sin(two_pi * j / grid));
                const double v = a.dot(cross * b);
                if (v > best) {
                    best = v;
                    bphi = two_pi * i / grid;
                    bpsi = two_pi * j / grid;
                }
            }
        }
        const Eigen::Vector2d a2(-std::sin(bphi), std::cos(bphi));
        const Eigen::Vector2d b2(-std::sin(bpsi), std::cos(bpsi));
        const double second = std::abs(a2.dot(cross * b2));
        if (std::abs(angles[0] - std::acos(std::clamp(best, 0.0, 1.0))) >= 1e-3 ||
            std::abs(angles[1] - std::acos(std::clamp(second, 0.0, 1.0))) >= 1e-3) {
            why = "principal angles differ from the recursive oracle";
            return false;
        }
    }
    return true;
}

bool prop_noise_bound(std::string& why) {
    const std::vector<Index> dims{50, 50, 50}, ranks{2, 2, 2};
    const double bound = noise_contraction_bound(dims, ranks, 0.01, 1.0);
    Rng rng(8005);
    DenseTensor noise(std::vector<Index>(dims.begin(), dims.end()));
    rng.fill_gaussian({noise.data(), static_cast<std::size_t>(noise.size())});
    double sup = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
        std::vector<Matrix> mats;
        for (std::size_t l = 0; l < dims.size(); ++l) {
            mats.push_back(haar_basis(dims[l], ranks[l], rng).matrix());
        }
        const double norm = frob_norm(contract(noise, mats));
        sup = std::max(sup, norm * norm);
    }
    if (sup > bound) {
        why = "Monte-Carlo sup exceeded the bound";
        return false;
    }
    return true;
}

void criterion_8() {
    struct Property {
        const char* name;
        bool (*run)(std::string&);
    };
    const Property properties[] = {
        {"unfold/fold round trip", prop_roundtrip},
        {"Tucker-Kronecker unfolding identity", prop_tucker_kron},
        {"contract vs nested-loop oracle", prop_contract_oracle},
        {"HOOI objective monotonicity (50 instances)", prop_hooi_monotone},
        {"Stieltjes quadratic residual on a complex grid", prop_stieltjes},
        {"principal angles vs recursive oracle", prop_principal_angles},
        {"noise contraction bound vs 1000 Stiefel draws", prop_noise_bound},
    };
    bool all = true;
    std::ostringstream detail;
    for (const auto& p : properties) {
        std::string why;
        const bool ok = p.run(why);
        all = all && ok;
        if (!ok) detail << p.name << ": " << why << "; ";
    }
    if (all) detail << "all 7 property suites hold";
    report(8, all, "property suites", detail.str());
}

// ---------------------------------------------------------------------
// Criterion 9: byte-identical reruns.
// ---------------------------------------------------------------------

std::string csv_of(const RecordTable& table) {
    std::ostringstream os;
    write_csv(table, os);
    return os.str();
}

void criterion_9() {
    ExperimentConfig esd;
    esd.experiment = ExperimentKind::esd;
    esd.dims = {60, 100, 140};
    esd.ranks = {3, 4, 5};
    esd.omega = 15.0;
    esd.trials = 3;
    esd.base_seed = 99;
    const bool esd_same = csv_of(run_esd(esd, 0)) == csv_of(run_esd(esd, 0));

    ExperimentConfig sweep;
    sweep.experiment = ExperimentKind::alignment_sweep;
    sweep.dims = {20, 40, 60};
    sweep.ranks = {2, 2, 2};
    sweep.omega_grid = {0.5, 4.0};
    sweep.trials = 3;
    sweep.base_seed = 99;
    const bool sweep_same = csv_of(run_alignment_sweep(sweep, 0)) == csv_of(run_alignment_sweep(sweep, 0));

    std::ostringstream detail;
    detail << "esd rerun byte-identical: " << (esd_same ? "yes" : "NO")
           << "; alignment rerun byte-identical: " << (sweep_same ? "yes" : "NO");
    report(9, esd_same && sweep_same, "determinism of experiment output", detail.str());
}

}  // namespace

int main() {
    std::printf("tensorlab acceptance suite\n");
    const EsdData esd = run_reference_esd();
    criterion_1(esd);
    criterion_2(esd);
    criterion_3(esd);
    criterion_4(esd);
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
