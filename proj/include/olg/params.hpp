#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace olg {

// Occupation ids. NW carries no wage.
enum class Occ : int { NW = 0, NL = 1, L = 2 };

inline int occ_index(Occ j) { return static_cast<int>(j); }

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Piecewise-linear deduction: amount(gross) = rate*gross + add on the bracket
// containing gross, clamped to [floor_amount, cap]. Never exceeds gross.
struct DeductionSchedule {
    struct Piece {
        double upper;  // bracket upper bound (inf for last)
        double rate;
        double add;
    };
    std::vector<Piece> pieces;
    double floor_amount = 0.0;
    double cap = 1e300;

    double operator()(double gross) const;
    bool empty() const { return pieces.empty(); }
};

// Progressive marginal-rate schedule. thresholds[i] is the upper bound of
// bracket i (last bracket unbounded), rates has one more entry.
struct BracketSchedule {
    std::vector<double> thresholds;
    std::vector<double> rates;

    double tax(double base) const;
};

// Tax and social-security system, in model units.
struct TaxSystem {
    BracketSchedule income_brackets;
    double residence_rate = 0.10;      // flat add-on to the bracket schedule
    double basic_deduction = 0.0;
    DeductionSchedule employment_deduction;
    DeductionSchedule pension_deduction;
    double ssc_rate = 0.143;           // flat social-security contribution on labor earnings
    double earnings_test_threshold = 0.0;
    double earnings_test_reduction = 0.5;
    double inherit_exemption = 0.0;
    double inherit_rate = 0.20;
};

// Statutory fiscal data exactly as it appears in the config file (JPY/year).
// Model-unit equivalents are derived from it at load time.
struct FiscalRaw {
    BracketSchedule income_brackets;
    double residence_rate = 0.10;
    double basic_deduction = 380000.0;
    DeductionSchedule employment_deduction;
    DeductionSchedule pension_deduction;
    double ssc_rate = 0.143;
    double earnings_test_threshold = 470000.0 * 12.0;
    double earnings_test_reduction = 0.5;
    double inherit_exemption = 3.6e7;
    double inherit_rate = 0.20;
    double b_floor = 65008.0 * 12.0;
    double ebar = 620000.0 * 12.0;
};

struct ModelParams {
    // preferences
    double sigma = 2.0;       // CRRA curvature; the source calibration never pins this, see docs
    double gamma = 1.5;       // Frisch elasticity
    double beta = 1.0094;
    double mu_phi = 10.40;    // mean of labor-disutility intercept
    double delta_phi = 1.900; // spread of labor-disutility intercept
    double kappa = 0.04850;   // slope of disutility after R
    double xi = 0.3900;       // fixed participation cost
    double mu1 = -43.00;      // bequest concern
    double mu2 = 1.700;       // bequest luxury scale
    double chi = 0.10;        // taste-shock scale over work alternatives (logit smoothing)

    // labor technology, indexed [NL, L]
    std::array<double, 2> theta = {0.4088, 0.2480};
    std::array<double, 2> omega = {0.02130, 0.01900};
    std::array<double, 2> pi = {0.1130, 0.06200}; // stored as magnitudes; wages fall after R
    std::array<int, 2> xbar = {35, 29};
    std::array<int, 2> rbar = {37, 37};
    int R = 35;
    double sigma_eta1 = 0.1600;
    bool eta1_sigma_is_variance = false;

    // production
    double alpha = 0.36;
    double psi = 0.67;
    double nu = 0.5570;
    double delta = 0.088;
    double A = 1.0;

    // pension / fiscal
    double rho = 0.3310;     // employees' pension earnings-replacement slope
    double b_floor = 0.0;    // national pension benefit, model units per year (set at load)
    double ebar = 0.0;       // pension earnings cap, model units per year (set at load)
    double p60_prob = 0.1372;
    double tau_r = 0.20315;

    // time structure (model periods; period 1 = age 25)
    int T_work_end = 55;
    int T_max = 80;
    int pension_e_update_end = 46; // last period with e-updates (age 70)

    double hbar = 105.0;  // weekly-hour normalizer
    double F = 35.0 / 105.0; // full-time threshold in normalized hours

    double unit_scale = 1.1e7; // JPY per model unit, used only to convert statutory amounts

    std::vector<double> survival; // S(t), t = 1..T_max, S(T_max) = 0

    FiscalRaw fiscal_jpy; // statutory amounts as configured
    TaxSystem tax;        // derived, model units; rebuilt by finalize()

    double survival_at(int t) const { return survival.at(static_cast<size_t>(t - 1)); }
    void finalize(); // derive tax, b_floor, ebar from fiscal_jpy and unit_scale
    void validate() const;
};

struct GridSpec {
    int na = 40;
    double amax = 12.0;
    double acurve = 3.0;   // power spacing exponent for the asset grid
    int ne = 7;
    std::vector<double> hours = {0.0, 10.0 / 105.0, 20.0 / 105.0, 28.0 / 105.0,
                                 35.0 / 105.0, 40.0 / 105.0, 50.0 / 105.0, 60.0 / 105.0};
    int nphi = 5;
    int neta = 5;

    void validate(const ModelParams& p) const;
};

// A fiscal/pension configuration for one experiment.
struct PolicyRegime {
    std::string name = "baseline";
    bool earnings_test_enabled = true;
    int early_period = 36;   // period of first possible receipt; eligibility revealed here
    int normal_period = 41;  // everyone eligible from this period on
    double rho_multiplier = 1.0;
    double tax_credit_multiplier = 1.0;
    bool pension_tax_exempt = false;
    std::optional<std::array<double, 2>> theta_override;
    std::optional<std::array<double, 2>> pi_override;
    std::optional<std::array<double, 2>> omega_override;

    int reveal_period() const { return early_period; }
    void validate() const;
};

// Technology parameters with any regime overrides applied.
struct EffectiveTech {
    std::array<double, 2> theta;
    std::array<double, 2> omega;
    std::array<double, 2> pi;
};

EffectiveTech effective_tech(const ModelParams& p, const PolicyRegime& r);

struct Config {
    ModelParams params;
    GridSpec grids;
    PolicyRegime regime;
};

// Defaults reproduce the published calibration values; the survival schedule
// is a shipped Gompertz-style male table capped so beta*S(t) < 1.
ModelParams default_params();
std::vector<double> default_survival(int T_max, double beta);
PolicyRegime baseline_regime();

Config load_params(const std::string& path);
Config parse_config(const std::string& text);
std::string serialize_config(const Config& cfg);
void save_config(const Config& cfg, const std::string& path);

} // namespace olg
