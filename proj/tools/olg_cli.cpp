#include "olg/analysis.hpp"
#include "olg/occlass.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fnv1a_hex(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string iso_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

olg::Config load_config_or_default(const std::string& path) {
    if (path.empty()) {
        olg::Config cfg;
        cfg.params = olg::default_params();
        cfg.regime = olg::baseline_regime();
        return cfg;
    }
    return olg::load_params(path);
}

void apply_profile(olg::GridSpec& g, const std::string& profile) {
    if (profile == "fast") return;
    if (profile == "full") {
        g.na = 60;
        g.ne = 9;
        return;
    }
    throw CLI::ValidationError("profile must be fast or full");
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_equilibrium_csv(const fs::path& path, const olg::EquilibriumResult& eq) {
    std::ofstream out(path);
    out << "field,value\n";
    out << "converged," << (eq.converged ? 1 : 0) << '\n';
    out << "iterations," << eq.log.size() << '\n';
    out << "r," << num(eq.prices.r) << '\n';
    out << "w1," << num(eq.prices.w1) << '\n';
    out << "w2," << num(eq.prices.w2) << '\n';
    out << "A," << num(eq.prices.A) << '\n';
    out << "K," << num(eq.K) << '\n';
    out << "L1," << num(eq.L1) << '\n';
    out << "L2," << num(eq.L2) << '\n';
    out << "Y," << num(eq.Y) << '\n';
    out << "Tr," << num(eq.Tr) << '\n';
    out << "B," << num(eq.B) << '\n';
    out << "tax_revenue," << num(eq.taxes_total) << '\n';
    out << "res_capital," << num(eq.residuals.capital) << '\n';
    out << "res_labor1," << num(eq.residuals.labor1) << '\n';
    out << "res_labor2," << num(eq.residuals.labor2) << '\n';
    out << "res_government," << num(eq.residuals.government) << '\n';
    out << "res_bequests," << num(eq.residuals.bequests) << '\n';
    out << "walras_gap," << num(eq.walras_gap) << '\n';
}

void write_iterations_csv(const fs::path& path, const olg::EquilibriumResult& eq) {
    std::ofstream out(path);
    out << "iter,K,L1,L2,Tr,B,res_capital,res_labor1,res_labor2,res_government,res_bequests\n";
    for (const auto& it : eq.log)
        out << it.iter << ',' << num(it.K) << ',' << num(it.L1) << ',' << num(it.L2) << ','
            << num(it.Tr) << ',' << num(it.B) << ',' << num(it.res.capital) << ','
            << num(it.res.labor1) << ',' << num(it.res.labor2) << ',' << num(it.res.government)
            << ',' << num(it.res.bequests) << '\n';
}

void write_moments_csv(const fs::path& path, const olg::MomentSet& mo) {
    std::ofstream out(path);
    out << "moment,value\n";
    out << "mean_hours_25_59," << num(mo.mean_hours_25_59) << '\n';
    out << "sd_log_hours_25_59," << num(mo.sd_log_hours_25_59) << '\n';
    out << "share_hours_lt20_25_59_pct," << num(mo.share_hours_lt20_25_59) << '\n';
    out << "lfp_60_79_pct," << num(mo.lfp_60_79) << '\n';
    out << "mean_hours_25_79," << num(mo.mean_hours_25_79) << '\n';
    out << "pt_rate_nl_pct," << num(mo.pt_rate[0]) << '\n';
    out << "pt_rate_l_pct," << num(mo.pt_rate[1]) << '\n';
    out << "pop_ratio_nl_l," << num(mo.pop_ratio_nl_l) << '\n';
    out << "wage_ratio_nl_l," << num(mo.wage_ratio_nl_l) << '\n';
    out << "pt_penalty_nl," << num(mo.pt_penalty[0]) << '\n';
    out << "pt_penalty_l," << num(mo.pt_penalty[1]) << '\n';
    out << "exp_premium_nl," << num(mo.exp_premium[0]) << '\n';
    out << "exp_premium_l," << num(mo.exp_premium[1]) << '\n';
    out << "wage_reduction_nl," << num(mo.wage_reduction[0]) << '\n';
    out << "wage_reduction_l," << num(mo.wage_reduction[1]) << '\n';
    out << "mean_pension," << num(mo.mean_pension) << '\n';
    out << "inheritance_rate," << num(mo.inheritance_rate) << '\n';
    out << "assets_p30_80plus," << num(mo.assets_p30_80plus) << '\n';
    out << "labor_60_79," << num(mo.labor_60_79) << '\n';
    out << "mean_hourly_wage," << num(mo.mean_hourly_wage) << '\n';
    out << "Y," << num(mo.Y) << '\n';
    out << "K," << num(mo.K) << '\n';
    out << "L1," << num(mo.L1) << '\n';
    out << "L2," << num(mo.L2) << '\n';
    out << "tax_revenue," << num(mo.tax_revenue) << '\n';
    out << "r," << num(mo.r) << '\n';
}

void write_marginals_csv(const fs::path& path, const olg::EquilibriumResult& eq,
                         const olg::ModelParams& p, const olg::StateSpace& ss,
                         const olg::PolicyRegime& regime) {
    std::ofstream out(path);
    out << "age,mass,mean_assets,lfp_pct,share_nl_pct,share_l_pct,mean_hours_workers\n";
    for (int t = 1; t <= p.T_max; ++t) {
        double mass = 0.0, asum = 0.0, wmass = 0.0, nl = 0.0, l = 0.0, hsum = 0.0;
        if (t <= p.T_work_end) {
            const std::vector<double>& m = eq.dist.young_at(t);
            const olg::ArmContext cx = olg::arm_context(eq.sol, p, ss, regime, t);
            const int np = cx.np;
            for (int ixj = 0; ixj < olg::StateSpace::NXJ; ++ixj)
                for (int ieta = 0; ieta < ss.neta; ++ieta)
                    for (int ie = 0; ie < ss.ne; ++ie)
                        for (int ip = 0; ip < np; ++ip) {
                            const olg::AltRow row = olg::alt_row(cx, ixj, ieta, ie, ip);
                            for (int iphi = 0; iphi < ss.nphi; ++iphi) {
                                int base = ss.yidx(ixj, iphi, ieta, ie, ip, np, 0);
                                for (int ia = 0; ia < ss.na; ++ia) {
                                    double mm = m[static_cast<size_t>(base + ia)];
                                    if (mm <= 0.0) continue;
                                    mass += mm;
                                    asum += mm * ss.agrid[static_cast<size_t>(ia)];
                                    const olg::StateArms arms = olg::state_arms(
                                        cx, row, ixj, iphi, ieta, ie, ip, ia, false);
                                    for (int k = 1; k < arms.nalts; ++k) {
                                        const double mk = mm * arms.prob[k];
                                        if (mk <= 0.0) continue;
                                        wmass += mk;
                                        if (row.alt[k].j == 1) nl += mk;
                                        if (row.alt[k].j == 2) l += mk;
                                        hsum += mk *
                                                ss.hours[static_cast<size_t>(row.alt[k].ih)];
                                    }
                                }
                            }
                        }
        } else {
            const std::vector<double>& m = eq.dist.old_at(t, p.T_work_end);
            for (int ie = 0; ie < ss.ne; ++ie)
                for (int ia = 0; ia < ss.na; ++ia) {
                    double mm = m[static_cast<size_t>(ss.oidx(ie, ia))];
                    mass += mm;
                    asum += mm * ss.agrid[static_cast<size_t>(ia)];
                }
        }
        out << olg::age_of(t) << ',' << num(mass) << ',' << num(mass > 0 ? asum / mass : 0.0)
            << ',' << num(mass > 0 ? 100.0 * wmass / mass : 0.0) << ','
            << num(mass > 0 ? 100.0 * nl / mass : 0.0) << ','
            << num(mass > 0 ? 100.0 * l / mass : 0.0) << ','
            << num(wmass > 0 ? hsum / wmass : 0.0) << '\n';
    }
}

void write_report_csv(const fs::path& path, const olg::ExperimentReport& rep) {
    std::ofstream out(path);
    out << "field,value\n";
    out << "name," << rep.name << '\n';
    out << "partial_equilibrium," << (rep.partial_equilibrium ? 1 : 0) << '\n';
    out << "converged," << (rep.converged ? 1 : 0) << '\n';
    out << "cev_short_25_pct," << num(rep.cev_short_25) << '\n';
    out << "cev_long_25_pct," << num(rep.cev_long_25) << '\n';
    out << "d_output_pct," << num(rep.d_output) << '\n';
    out << "d_labor_nl_pct," << num(rep.d_L1) << '\n';
    out << "d_labor_l_pct," << num(rep.d_L2) << '\n';
    out << "d_labor_60_79_pct," << num(rep.d_labor_60_79) << '\n';
    out << "d_capital_pct," << num(rep.d_capital) << '\n';
    out << "d_tax_pct," << num(rep.d_tax) << '\n';
    out << "r_pct," << num(100.0 * rep.alt.r) << '\n';
    out << "lfp_60_79_pct," << num(rep.alt.lfp_60_79) << '\n';
    out << "pt_rate_nl_pct," << num(rep.alt.pt_rate[0]) << '\n';
    out << "pt_rate_l_pct," << num(rep.alt.pt_rate[1]) << '\n';
    out << "avg_hours_25_79," << num(rep.alt.mean_hours_25_79) << '\n';
    out << "pop_ratio_nl_l," << num(rep.alt.pop_ratio_nl_l) << '\n';
    out << "wage_ratio_nl_l," << num(rep.alt.wage_ratio_nl_l) << '\n';
    out << "pt_penalty_nl," << num(rep.alt.pt_penalty[0]) << '\n';
    out << "pt_penalty_l," << num(rep.alt.pt_penalty[1]) << '\n';
    out << "exp_premium_nl," << num(rep.alt.exp_premium[0]) << '\n';
    out << "exp_premium_l," << num(rep.alt.exp_premium[1]) << '\n';
    out << "wage_reduction_nl," << num(rep.alt.wage_reduction[0]) << '\n';
    out << "wage_reduction_l," << num(rep.alt.wage_reduction[1]) << '\n';
}

void write_cev_csv(const fs::path& path, const olg::ExperimentReport& rep) {
    std::ofstream out(path);
    out << "age,cev_pct\n";
    for (size_t i = 0; i < rep.cev_age.size(); ++i)
        out << rep.cev_age[i] << ',' << num(rep.cev_by_age[i]) << '\n';
}

json manifest_base(const olg::Config& cfg, const olg::SolveOptions& opt) {
    json m;
    m["config_hash"] = fnv1a_hex(olg::serialize_config(cfg));
    m["regime"] = cfg.regime.name;
    m["tolerances"] = {{"tol", opt.tol}, {"tol_bequests", opt.tol_bequests}};
    m["timestamp"] = iso_now();
    return m;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"life-cycle occupational-choice model driver"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", profile = "fast", regime_name = "baseline";
    double tol = 1e-4;
    int max_iter = 300;
    bool verbose = false;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--config", config_path, "config file (defaults built in)");
        c->add_option("--out", out_dir, "output directory");
        c->add_option("--profile", profile, "fast or full");
        c->add_option("--tol", tol, "equilibrium tolerance");
        c->add_option("--max-iter", max_iter, "fixed-point iteration cap");
        c->add_flag("--verbose", verbose, "log iterations to stderr");
    };

    CLI::App* solve = app.add_subcommand("solve", "solve a stationary equilibrium");
    add_common(solve);
    solve->add_option("--regime", regime_name, "experiment/regime name");

    CLI::App* experiments = app.add_subcommand("experiments", "run policy experiments");
    add_common(experiments);
    std::vector<std::string> names;
    experiments->add_option("--names", names, "experiment names or 'all'")->required();

    CLI::App* moments = app.add_subcommand("moments", "solve and print moments");
    add_common(moments);
    moments->add_option("--regime", regime_name, "experiment/regime name");

    CLI::App* occl = app.add_subcommand("occlass", "classify occupations from microdata CSV");
    std::string occ_in, occ_out = "occlass.csv";
    bool quartic = false;
    int min_obs = 200;
    occl->add_option("--input", occ_in, "input CSV")->required();
    occl->add_option("--output", occ_out, "output CSV");
    occl->add_flag("--quartic", quartic, "add the fourth hours power");
    occl->add_option("--min-obs", min_obs, "minimum observations per occupation");

    CLI::App* synth = app.add_subcommand("gen-synth", "generate a synthetic microdata corpus");
    std::string synth_out = "synthetic.csv";
    int n_occ = 135, n_curved = 67, n_per = 500;
    unsigned seed = 20240817;
    synth->add_option("--output", synth_out, "output CSV");
    synth->add_option("--n-occ", n_occ, "number of occupations");
    synth->add_option("--n-curved", n_curved, "occupations with planted curvature");
    synth->add_option("--n-per", n_per, "records per occupation");
    synth->add_option("--seed", seed, "RNG seed");

    CLI::App* norm = app.add_subcommand("normalize", "calibrate TFP so the mean hourly wage is 1");
    add_common(norm);
    int norm_rounds = 6;
    norm->add_option("--rounds", norm_rounds, "normalization iterations");

    CLI11_PARSE(app, argc, argv);

    try {
        if (occl->parsed()) {
            olg::OcclassOptions opt{quartic, min_obs};
            auto recs = olg::read_wage_csv(occ_in);
            auto fits = olg::classify(recs, opt);
            olg::write_fits_csv(fits, occ_out);
            std::printf("fitted %zu occupations -> %s\n", fits.size(), occ_out.c_str());
            return 0;
        }
        if (synth->parsed()) {
            olg::generate_synthetic(synth_out, n_occ, n_curved, n_per, seed);
            std::printf("wrote %s\n", synth_out.c_str());
            return 0;
        }

        olg::Config cfg = load_config_or_default(config_path);
        apply_profile(cfg.grids, profile);
        cfg.params.validate();
        cfg.grids.validate(cfg.params);
        olg::StateSpace ss = olg::StateSpace::build(cfg.params, cfg.grids);
        olg::SolveOptions opt;
        opt.tol = tol;
        opt.max_iter = max_iter;
        opt.verbose = verbose;

        if (norm->parsed()) {
            for (int round = 0; round < norm_rounds; ++round) {
                olg::EquilibriumResult eq =
                    olg::solve_equilibrium(cfg.params, ss, cfg.regime, opt);
                double w = olg::mean_hourly_wage(eq, cfg.params, ss, cfg.regime);
                std::printf("round %d: A=%.8f mean_hourly_wage=%.6f r=%.5f converged=%d\n",
                            round, cfg.params.A, w, eq.prices.r, eq.converged ? 1 : 0);
                std::fflush(stdout);
                if (std::abs(w - 1.0) < 1e-3) break;
                // w scales roughly as A^{1/(1-alpha)}, so damp the update
                double step = std::pow(w, 1.0 - cfg.params.alpha);
                cfg.params.A /= step;
                double scale = std::pow(1.0 / step, 1.0 / (1.0 - cfg.params.alpha));
                opt.K0 = eq.K * scale;
                opt.L10 = eq.L1;
                opt.L20 = eq.L2;
                opt.Tr0 = eq.Tr * scale;
                opt.B0 = eq.B * scale;
            }
            std::printf("final A=%.8f\n", cfg.params.A);
            return 0;
        }

        fs::create_directories(out_dir);
        const fs::path dir(out_dir);

        if (solve->parsed() || moments->parsed()) {
            olg::PolicyRegime regime = olg::experiment_regime(regime_name, cfg.params);
            olg::EquilibriumResult eq = olg::solve_equilibrium(cfg.params, ss, regime, opt);
            olg::MomentSet mo = olg::compute_moments(eq, cfg.params, ss, regime);
            if (moments->parsed()) {
                write_moments_csv(dir / "moments.csv", mo);
                std::printf("%s", olg::format_residual_report(eq).c_str());
                return eq.converged ? 0 : 2;
            }
            write_equilibrium_csv(dir / "equilibrium.csv", eq);
            write_iterations_csv(dir / "iterations.csv", eq);
            write_moments_csv(dir / "moments.csv", mo);
            write_marginals_csv(dir / "marginals.csv", eq, cfg.params, ss, regime);
            json m = manifest_base(cfg, opt);
            m["outputs"] = {"equilibrium.csv", "iterations.csv", "moments.csv", "marginals.csv"};
            m["converged"] = eq.converged;
            m["iterations"] = eq.log.size();
            write_text(dir / "manifest.json", m.dump(2) + "\n");
            std::printf("%s", olg::format_residual_report(eq).c_str());
            return eq.converged ? 0 : 2;
        }

        if (experiments->parsed()) {
            if (names.size() == 1 && names[0] == "all") names = olg::experiment_names();
            if (names.empty()) throw CLI::ValidationError("no experiment names given");
            for (const std::string& n : names)
                olg::experiment_regime(n, cfg.params); // validate names up front

            olg::PolicyRegime base_regime = olg::baseline_regime();
            olg::EquilibriumResult base = olg::solve_equilibrium(cfg.params, ss, base_regime, opt);
            if (!base.converged) {
                std::fprintf(stderr, "baseline failed to converge:\n%s",
                             olg::format_residual_report(base).c_str());
                return 2;
            }
            std::ofstream combined(dir / "experiments.csv");
            combined << "name,partial,converged,cev_short_25_pct,cev_long_25_pct,d_output_pct,"
                        "d_labor_nl_pct,d_labor_l_pct,d_labor_60_79_pct,d_capital_pct,d_tax_pct,"
                        "r_pct,lfp_60_79_pct\n";
            json m = manifest_base(cfg, opt);
            json outs = json::array();
            outs.push_back("experiments.csv");
            for (const std::string& n : names) {
                olg::ExperimentReport rep =
                    olg::run_experiment(n, cfg.params, ss, base_regime, base, opt);
                write_report_csv(dir / (n + ".csv"), rep);
                outs.push_back(n + ".csv");
                if (!rep.partial_equilibrium && n != "baseline") {
                    write_cev_csv(dir / (n + "_cev.csv"), rep);
                    outs.push_back(n + "_cev.csv");
                }
                combined << rep.name << ',' << (rep.partial_equilibrium ? 1 : 0) << ','
                         << (rep.converged ? 1 : 0) << ',' << num(rep.cev_short_25) << ','
                         << num(rep.cev_long_25) << ',' << num(rep.d_output) << ','
                         << num(rep.d_L1) << ',' << num(rep.d_L2) << ','
                         << num(rep.d_labor_60_79) << ',' << num(rep.d_capital) << ','
                         << num(rep.d_tax) << ',' << num(100.0 * rep.alt.r) << ','
                         << num(rep.alt.lfp_60_79) << '\n';
                std::printf("%s done (converged=%d)\n", n.c_str(), rep.converged ? 1 : 0);
                std::fflush(stdout);
            }
            m["outputs"] = outs;
            write_text(dir / "manifest.json", m.dump(2) + "\n");
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
