#pragma once

#include <optional>
#include <string>
#include <vector>

namespace olg {

// One microdata row. Categorical controls are small integer codes.
struct WageRecord {
    int occupation = 0;
    double wage = 0.0;  // hourly
    double hours = 0.0; // weekly
    int age = 0;
    int sex = 0;       // 0/1
    int education = 0; // 0..3
    int marital = 0;   // 0/1
    int child = 0;     // 0/1
    int region = 0;    // 0..7
    int year = 0;
};

struct OccFit {
    int occupation = 0;
    int n = 0;
    bool fitted = false;
    std::string error;                // rank deficiency etc.
    std::vector<double> beta_hours;   // hours, hours^2, hours^3 [, hours^4]
    double avg_wage = 0.0;
    double penalty = 0.0;
    std::string label; // "nonlinear" or "linear"
};

struct OcclassOptions {
    bool quartic = false; // add the fourth hours power
    int min_obs = 200;
};

std::vector<WageRecord> read_wage_csv(const std::string& path);
void write_fits_csv(const std::vector<OccFit>& fits, const std::string& path);

// OLS of hourly wage on the hours polynomial, cubic age, dummy-encoded
// controls and year fixed effects, for a single occupation's records.
std::optional<OccFit> fit_occupation(const std::vector<WageRecord>& records,
                                     const OcclassOptions& opt);

// (b1*30 + b2*30^2 + b3*30^3 [+ b4*30^4]) / avg_wage
double part_time_penalty(const std::vector<double>& beta_hours, double avg_wage);

// Fit every occupation with enough observations and label the half with the
// largest penalties nonlinear (ties and ordering broken by occupation id).
std::vector<OccFit> classify(const std::vector<WageRecord>& records, const OcclassOptions& opt);

// Synthetic test corpus: n_curved occupations get a positive planted cubic
// hours profile, the rest have no hours effect. Deterministic in seed.
void generate_synthetic(const std::string& path, int n_occ, int n_curved, int n_per_occ,
                        unsigned seed);

} // namespace olg
