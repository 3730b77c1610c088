#include "olg/occlass.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace olg {

std::vector<WageRecord> read_wage_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<WageRecord> out;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
    const std::string expect =
        "occupation,wage,hours,age,sex,education,marital,child,region,year";
    if (line != expect) throw std::runtime_error("unexpected header in " + path);
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream s(line);
        std::string f;
        std::vector<std::string> fields;
        while (std::getline(s, f, ',')) fields.push_back(f);
        if (fields.size() != 10)
            throw std::runtime_error(path + ": bad field count on line " + std::to_string(lineno));
        WageRecord r;
        r.occupation = std::stoi(fields[0]);
        r.wage = std::stod(fields[1]);
        r.hours = std::stod(fields[2]);
        r.age = std::stoi(fields[3]);
        r.sex = std::stoi(fields[4]);
        r.education = std::stoi(fields[5]);
        r.marital = std::stoi(fields[6]);
        r.child = std::stoi(fields[7]);
        r.region = std::stoi(fields[8]);
        r.year = std::stoi(fields[9]);
        if (r.wage <= 0.0)
            throw std::runtime_error(path + ": non-positive wage on line " + std::to_string(lineno));
        if (r.hours <= 0.0 || r.hours > 105.0)
            throw std::runtime_error(path + ": hours out of range on line " + std::to_string(lineno));
        out.push_back(r);
    }
    return out;
}

void write_fits_csv(const std::vector<OccFit>& fits, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "occupation,n,fitted,b1,b2,b3,b4,avg_wage,penalty,label,error\n";
    char buf[64];
    for (const OccFit& f : fits) {
        out << f.occupation << ',' << f.n << ',' << (f.fitted ? 1 : 0) << ',';
        for (int k = 0; k < 4; ++k) {
            if (f.fitted && k < static_cast<int>(f.beta_hours.size())) {
                std::snprintf(buf, sizeof(buf), "%.10g", f.beta_hours[static_cast<size_t>(k)]);
                out << buf;
            }
            out << ',';
        }
        if (f.fitted) {
            std::snprintf(buf, sizeof(buf), "%.10g", f.avg_wage);
            out << buf << ',';
            std::snprintf(buf, sizeof(buf), "%.10g", f.penalty);
            out << buf << ',';
        } else {
            out << ",,";
        }
        out << f.label << ',' << f.error << '\n';
    }
}

double part_time_penalty(const std::vector<double>& beta_hours, double avg_wage) {
    if (avg_wage <= 0.0) throw std::invalid_argument("avg_wage must be positive");
    double num = 0.0, pw = 1.0;
    for (double b : beta_hours) {
        pw *= 30.0;
        num += b * pw;
    }
    return num / avg_wage;
}

std::optional<OccFit> fit_occupation(const std::vector<WageRecord>& records,
                                     const OcclassOptions& opt) {
    OccFit fit;
    fit.n = static_cast<int>(records.size());
    if (records.empty()) return std::nullopt;
    fit.occupation = records[0].occupation;
    if (fit.n < opt.min_obs) return std::nullopt;

    // collect observed category levels; one level dropped per dummy set
    std::set<int> edu_lv, reg_lv, yr_lv;
    for (const WageRecord& r : records) {
        edu_lv.insert(r.education);
        reg_lv.insert(r.region);
        yr_lv.insert(r.year);
    }
    auto dummies = [](const std::set<int>& lv) {
        std::vector<int> v(lv.begin(), lv.end());
        v.erase(v.begin()); // reference level
        return v;
    };
    const std::vector<int> edu = dummies(edu_lv), reg = dummies(reg_lv), yr = dummies(yr_lv);

    const int nh = opt.quartic ? 4 : 3;
    const int ncol = 1 + nh + 3 + 1 + static_cast<int>(edu.size()) + 1 + 1 +
                     static_cast<int>(reg.size()) + static_cast<int>(yr.size());
    Eigen::MatrixXd X(fit.n, ncol);
    Eigen::VectorXd y(fit.n);
    for (int i = 0; i < fit.n; ++i) {
        const WageRecord& r = records[static_cast<size_t>(i)];
        int c = 0;
        X(i, c++) = 1.0;
        double hp = 1.0;
        for (int k = 0; k < nh; ++k) {
            hp *= r.hours;
            X(i, c++) = hp;
        }
        const double a = r.age;
        X(i, c++) = a;
        X(i, c++) = a * a;
        X(i, c++) = a * a * a;
        X(i, c++) = r.sex;
        for (int lv : edu) X(i, c++) = r.education == lv ? 1.0 : 0.0;
        X(i, c++) = r.marital;
        X(i, c++) = r.child;
        for (int lv : reg) X(i, c++) = r.region == lv ? 1.0 : 0.0;
        for (int lv : yr) X(i, c++) = r.year == lv ? 1.0 : 0.0;
        y(i) = r.wage;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-9);
    if (qr.rank() < ncol) {
        fit.error = "rank-deficient design matrix";
        fit.fitted = false;
        return fit;
    }
    Eigen::VectorXd beta = qr.solve(y);
    fit.fitted = true;
    fit.beta_hours.assign(static_cast<size_t>(nh), 0.0);
    for (int k = 0; k < nh; ++k) fit.beta_hours[static_cast<size_t>(k)] = beta(1 + k);
    fit.avg_wage = y.mean();
    fit.penalty = part_time_penalty(fit.beta_hours, fit.avg_wage);
    return fit;
}

std::vector<OccFit> classify(const std::vector<WageRecord>& records, const OcclassOptions& opt) {
    std::map<int, std::vector<WageRecord>> by_occ;
    for (const WageRecord& r : records) by_occ[r.occupation].push_back(r);

    std::vector<OccFit> fits;
    for (const auto& [occ, recs] : by_occ) {
        std::optional<OccFit> f = fit_occupation(recs, opt);
        if (!f) continue; // below the observation floor
        fits.push_back(*f);
    }
    std::vector<OccFit*> ranked;
    for (OccFit& f : fits)
        if (f.fitted) ranked.push_back(&f);
    std::sort(ranked.begin(), ranked.end(), [](const OccFit* a, const OccFit* b) {
        if (a->penalty != b->penalty) return a->penalty > b->penalty;
        return a->occupation < b->occupation;
    });
    const size_t n_nl = (ranked.size() + 1) / 2;
    for (size_t i = 0; i < ranked.size(); ++i)
        ranked[i]->label = i < n_nl ? "nonlinear" : "linear";
    return fits;
}

void generate_synthetic(const std::string& path, int n_occ, int n_curved, int n_per_occ,
                        unsigned seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "occupation,wage,hours,age,sex,education,marital,child,region,year\n";
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uh(10.0, 60.0);
    std::uniform_int_distribution<int> uage(25, 59), usex(0, 1), uedu(0, 3), ubin(0, 1),
        ureg(0, 7), uyr(2016, 2020);
    std::normal_distribution<double> noise(0.0, 0.2);
    char buf[64];
    for (int occ = 1; occ <= n_occ; ++occ) {
        const bool curved = occ <= n_curved;
        for (int i = 0; i < n_per_occ; ++i) {
            const double h = uh(rng);
            const int age = uage(rng);
            const int sex = usex(rng), edu = uedu(rng), mar = ubin(rng), chi = ubin(rng),
                      reg = ureg(rng), yr = uyr(rng);
            double wage = 1.5 + 0.05 * sex + 0.04 * edu + 0.02 * mar + 0.01 * chi +
                          0.005 * reg + 0.01 * (yr - 2016) + 0.01 * (age - 40) -
                          2e-4 * (age - 40) * (age - 40);
            if (curved) wage += 1.2e-5 * h * h * h; // positive cubic hours profile
            wage += noise(rng);
            if (wage < 0.05) wage = 0.05;
            std::snprintf(buf, sizeof(buf), "%.6f", wage);
            out << occ << ',' << buf << ',';
            std::snprintf(buf, sizeof(buf), "%.4f", h);
            out << buf << ',' << age << ',' << sex << ',' << edu << ',' << mar << ',' << chi
                << ',' << reg << ',' << yr << '\n';
        }
    }
}

} // namespace olg
