#include "olg/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace olg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& key) {
    if (s == "inf") return kInf;
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("could not parse value '" + s + "' for key '" + key + "'");
    }
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    for (const auto& tok : split(s, ',')) {
        if (!tok.empty()) out.push_back(parse_double(tok, key));
    }
    return out;
}

// "upper:rate:add,..." with "inf" allowed as upper bound
DeductionSchedule parse_deduction(const std::string& s, double floor_amount, const std::string& key) {
    DeductionSchedule d;
    d.floor_amount = floor_amount;
    for (const auto& tok : split(s, ',')) {
        auto parts = split(tok, ':');
        if (parts.size() != 3) throw ConfigError("bad deduction piece '" + tok + "' for key '" + key + "'");
        d.pieces.push_back({parse_double(parts[0], key), parse_double(parts[1], key),
                            parse_double(parts[2], key)});
    }
    return d;
}

std::string fmt_deduction(const DeductionSchedule& d) {
    std::string out;
    for (size_t i = 0; i < d.pieces.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(d.pieces[i].upper) + ":" + fmt_double(d.pieces[i].rate) + ":" +
               fmt_double(d.pieces[i].add);
    }
    return out;
}

// "threshold:rate,...,inf:rate"
BracketSchedule parse_brackets(const std::string& s, const std::string& key) {
    BracketSchedule b;
    for (const auto& tok : split(s, ',')) {
        auto parts = split(tok, ':');
        if (parts.size() != 2) throw ConfigError("bad bracket '" + tok + "' for key '" + key + "'");
        double upper = parse_double(parts[0], key);
        double rate = parse_double(parts[1], key);
        if (!std::isinf(upper)) b.thresholds.push_back(upper);
        b.rates.push_back(rate);
    }
    if (b.rates.size() != b.thresholds.size() + 1)
        throw ConfigError("bracket schedule for '" + key + "' must end with an 'inf' bracket");
    return b;
}

std::string fmt_brackets(const BracketSchedule& b) {
    std::string out;
    for (size_t i = 0; i < b.rates.size(); ++i) {
        if (i) out += ",";
        std::string upper = i < b.thresholds.size() ? fmt_double(b.thresholds[i]) : "inf";
        out += upper + ":" + fmt_double(b.rates[i]);
    }
    return out;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(v[i]);
    }
    return out;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

} // namespace

double DeductionSchedule::operator()(double gross) const {
    if (gross <= 0.0 || pieces.empty()) return 0.0;
    double amount = pieces.back().rate * gross + pieces.back().add;
    for (const auto& p : pieces) {
        if (gross <= p.upper) {
            amount = p.rate * gross + p.add;
            break;
        }
    }
    amount = std::max(amount, floor_amount);
    amount = std::min(amount, cap);
    return std::min(amount, gross);
}

double BracketSchedule::tax(double base) const {
    if (base <= 0.0 || rates.empty()) return 0.0;
    double tax = 0.0;
    double lower = 0.0;
    for (size_t i = 0; i < thresholds.size(); ++i) {
        if (base <= thresholds[i]) return tax + rates[i] * (base - lower);
        tax += rates[i] * (thresholds[i] - lower);
        lower = thresholds[i];
    }
    return tax + rates.back() * (base - lower);
}

std::vector<double> default_survival(int T_max, double beta) {
    // Gompertz hazard fit to an abridged male life table, capped so that
    // beta*S(t) < 1 holds with beta slightly above one.
    const double a = 6.2e-5, b = 0.0837;
    const double s_cap = std::nextafter(1.0 / beta, 0.0) * (1.0 - 1e-12);
    std::vector<double> S(static_cast<size_t>(T_max));
    for (int t = 1; t <= T_max; ++t) {
        double age = 24.0 + t;
        double s = std::exp(-a * std::exp(b * age));
        S[static_cast<size_t>(t - 1)] = std::min(s, s_cap);
    }
    S.back() = 0.0;
    return S;
}

ModelParams default_params() {
    ModelParams p;
    FiscalRaw& f = p.fiscal_jpy;
    f.income_brackets = parse_brackets(
        "1950000:0.05,3300000:0.10,6950000:0.20,9000000:0.23,18000000:0.33,40000000:0.40,inf:0.45",
        "income_brackets");
    f.employment_deduction = parse_deduction(
        "1800000:0.4:0,3600000:0.3:180000,6600000:0.2:540000,10000000:0.1:1200000,inf:0:2200000",
        650000.0, "employment_deduction");
    f.pension_deduction = parse_deduction(
        "3300000:0:1200000,4100000:0.25:375000,7700000:0.15:785000,inf:0.05:1555000",
        1200000.0, "pension_deduction");
    p.survival = default_survival(p.T_max, p.beta);
    p.finalize();
    return p;
}

void ModelParams::finalize() {
    const double u = unit_scale;
    const FiscalRaw& f = fiscal_jpy;
    TaxSystem t;
    t.income_brackets = f.income_brackets;
    for (auto& th : t.income_brackets.thresholds) th /= u;
    t.residence_rate = f.residence_rate;
    t.basic_deduction = f.basic_deduction / u;
    auto scale_ded = [u](DeductionSchedule d) {
        for (auto& piece : d.pieces) {
            if (!std::isinf(piece.upper)) piece.upper /= u;
            piece.add /= u;
        }
        d.floor_amount /= u;
        if (!std::isinf(d.cap)) d.cap /= u;
        return d;
    };
    t.employment_deduction = scale_ded(f.employment_deduction);
    t.pension_deduction = scale_ded(f.pension_deduction);
    t.ssc_rate = f.ssc_rate;
    t.earnings_test_threshold = f.earnings_test_threshold / u;
    t.earnings_test_reduction = f.earnings_test_reduction;
    t.inherit_exemption = f.inherit_exemption / u;
    t.inherit_rate = f.inherit_rate;
    tax = t;
    b_floor = f.b_floor / u;
    ebar = f.ebar / u;
}

void ModelParams::validate() const {
    require(theta[0] > -1.0, "theta_NL must exceed -1 (got " + fmt_double(theta[0]) + ")");
    require(theta[1] > -1.0, "theta_L must exceed -1 (got " + fmt_double(theta[1]) + ")");
    require(gamma > 0.0, "gamma must be positive (got " + fmt_double(gamma) + ")");
    require(chi > 0.0, "chi must be positive (got " + fmt_double(chi) + ")");
    require(sigma > 0.0 && sigma != 1.0, "sigma must be positive and not equal to 1 (got " + fmt_double(sigma) + ")");
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0,1) (got " + fmt_double(delta) + ")");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1) (got " + fmt_double(alpha) + ")");
    require(nu > 0.0 && nu < 1.0, "nu must lie in (0,1) (got " + fmt_double(nu) + ")");
    require(psi > 0.0, "psi must be positive (got " + fmt_double(psi) + ")");
    require(xbar[0] == 35 && xbar[1] == 29,
            "experience caps must be xbar_NL=35 and xbar_L=29");
    require(rbar[0] > R && rbar[1] > R, "Rbar must exceed R");
    require(p60_prob >= 0.0 && p60_prob <= 1.0, "p60_prob must lie in [0,1]");
    require(unit_scale > 0.0, "unit_scale must be positive");
    require(static_cast<int>(survival.size()) == T_max,
            "survival vector must have T_max=" + std::to_string(T_max) + " entries (got " +
                std::to_string(survival.size()) + ")");
    for (int t = 1; t <= T_max; ++t) {
        double s = survival_at(t);
        require(s >= 0.0 && s <= 1.0,
                "survival S(" + std::to_string(t) + ") must lie in [0,1] (got " + fmt_double(s) + ")");
        require(beta * s < 1.0, "beta*S(t) must be below 1 at t=" + std::to_string(t) +
                                    " (got " + fmt_double(beta * s) + ")");
    }
    require(survival.back() == 0.0, "survival S(T_max) must be 0");
    require(tax.ssc_rate >= 0.0 && tax.ssc_rate < 1.0, "ssc_rate must lie in [0,1)");
    for (double r : tax.income_brackets.rates)
        require(r >= 0.0 && r < 1.0, "income tax marginal rates must lie in [0,1)");
    for (size_t i = 1; i < tax.income_brackets.thresholds.size(); ++i)
        require(tax.income_brackets.thresholds[i] > tax.income_brackets.thresholds[i - 1],
                "income tax bracket thresholds must be increasing");
    require(T_work_end < T_max, "T_work_end must precede T_max");
}

void GridSpec::validate(const ModelParams& p) const {
    require(na >= 2, "asset grid needs at least 2 nodes");
    require(amax > 0.0, "asset grid max must be positive");
    require(ne >= 2, "e grid needs at least 2 nodes");
    require(nphi >= 1 && neta >= 1, "phi and eta need at least one node each");
    bool has_zero = false, has_ft = false, has_pt = false;
    for (double h : hours) {
        require(h >= 0.0 && h <= 1.0, "hours choices must lie in [0,1]");
        if (h == 0.0) has_zero = true;
        if (h >= p.F) has_ft = true;
        if (h > 0.0 && h < p.F) has_pt = true;
    }
    require(has_zero, "hours set must contain 0");
    require(has_ft, "hours set must contain a full-time option (h >= F)");
    require(has_pt, "hours set must contain a part-time option in (0,F)");
}

void PolicyRegime::validate() const {
    require(rho_multiplier >= 0.0, "rho_multiplier must be non-negative");
    require(tax_credit_multiplier >= 0.0, "tax_credit_multiplier must be non-negative");
    require(early_period <= normal_period, "early eligibility period must not exceed normal period");
    require(early_period >= 1, "eligibility periods must be positive");
}

EffectiveTech effective_tech(const ModelParams& p, const PolicyRegime& r) {
    EffectiveTech t{p.theta, p.omega, p.pi};
    if (r.theta_override) t.theta = *r.theta_override;
    if (r.omega_override) t.omega = *r.omega_override;
    if (r.pi_override) {
        t.pi = *r.pi_override;
        t.pi[0] = std::abs(t.pi[0]);
        t.pi[1] = std::abs(t.pi[1]);
    }
    return t;
}

PolicyRegime baseline_regime() { return PolicyRegime{}; }

namespace {

using KvMap = std::map<std::string, std::map<std::string, std::string>>;

KvMap parse_ini(const std::string& text) {
    KvMap sections;
    std::string section = "params";
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("malformed section header at line " + std::to_string(lineno));
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' at line " + std::to_string(lineno));
        sections[section][trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
    }
    return sections;
}

struct SectionReader {
    const std::map<std::string, std::string>* kv;
    void num(const std::string& key, double& out) const {
        if (!kv) return;
        auto it = kv->find(key);
        if (it != kv->end()) out = parse_double(it->second, key);
    }
    void integer(const std::string& key, int& out) const {
        double v = out;
        num(key, v);
        out = static_cast<int>(std::lround(v));
    }
    void flag(const std::string& key, bool& out) const {
        if (!kv) return;
        auto it = kv->find(key);
        if (it == kv->end()) return;
        const std::string& v = it->second;
        if (v == "true" || v == "1" || v == "on") out = true;
        else if (v == "false" || v == "0" || v == "off") out = false;
        else throw ConfigError("boolean key '" + key + "' must be true/false (got '" + v + "')");
    }
    bool raw(const std::string& key, std::string& out) const {
        if (!kv) return false;
        auto it = kv->find(key);
        if (it == kv->end()) return false;
        out = it->second;
        return true;
    }
};

SectionReader reader(const KvMap& m, const std::string& name) {
    auto it = m.find(name);
    return SectionReader{it == m.end() ? nullptr : &it->second};
}

} // namespace

Config parse_config(const std::string& text) {
    Config cfg;
    cfg.params = default_params();
    cfg.regime = baseline_regime();
    KvMap m = parse_ini(text);

    ModelParams& p = cfg.params;
    SectionReader ps = reader(m, "params");
    ps.num("sigma", p.sigma);
    ps.num("gamma", p.gamma);
    ps.num("beta", p.beta);
    ps.num("mu_phi", p.mu_phi);
    ps.num("delta_phi", p.delta_phi);
    ps.num("kappa", p.kappa);
    ps.num("xi", p.xi);
    ps.num("mu1", p.mu1);
    ps.num("mu2", p.mu2);
    ps.num("chi", p.chi);
    ps.num("theta_NL", p.theta[0]);
    ps.num("theta_L", p.theta[1]);
    ps.num("omega_NL", p.omega[0]);
    ps.num("omega_L", p.omega[1]);
    ps.num("pi_NL", p.pi[0]);
    ps.num("pi_L", p.pi[1]);
    p.pi[0] = std::abs(p.pi[0]);
    p.pi[1] = std::abs(p.pi[1]);
    ps.integer("xbar_NL", p.xbar[0]);
    ps.integer("xbar_L", p.xbar[1]);
    ps.integer("Rbar_NL", p.rbar[0]);
    ps.integer("Rbar_L", p.rbar[1]);
    ps.integer("R", p.R);
    ps.num("sigma_eta1", p.sigma_eta1);
    ps.flag("eta1_sigma_is_variance", p.eta1_sigma_is_variance);
    ps.num("alpha", p.alpha);
    ps.num("psi", p.psi);
    ps.num("nu", p.nu);
    ps.num("delta", p.delta);
    ps.num("A", p.A);
    ps.num("rho", p.rho);
    ps.num("p60_prob", p.p60_prob);
    ps.num("tau_r", p.tau_r);
    ps.integer("T_work_end", p.T_work_end);
    ps.integer("T_max", p.T_max);
    ps.integer("pension_e_update_end", p.pension_e_update_end);
    ps.num("hbar", p.hbar);
    ps.num("F", p.F);
    ps.num("unit_scale", p.unit_scale);
    std::string sv;
    if (ps.raw("survival", sv)) p.survival = parse_list(sv, "survival");
    else if (static_cast<int>(p.survival.size()) != p.T_max)
        p.survival = default_survival(p.T_max, p.beta);

    FiscalRaw& f = p.fiscal_jpy;
    SectionReader ts = reader(m, "tax_jpy");
    std::string raw;
    if (ts.raw("income_brackets", raw)) f.income_brackets = parse_brackets(raw, "income_brackets");
    ts.num("residence_rate", f.residence_rate);
    ts.num("basic_deduction", f.basic_deduction);
    double empl_floor = f.employment_deduction.floor_amount;
    double pens_floor = f.pension_deduction.floor_amount;
    ts.num("employment_deduction_floor", empl_floor);
    ts.num("pension_deduction_floor", pens_floor);
    if (ts.raw("employment_deduction", raw))
        f.employment_deduction = parse_deduction(raw, empl_floor, "employment_deduction");
    else
        f.employment_deduction.floor_amount = empl_floor;
    if (ts.raw("pension_deduction", raw))
        f.pension_deduction = parse_deduction(raw, pens_floor, "pension_deduction");
    else
        f.pension_deduction.floor_amount = pens_floor;
    ts.num("ssc_rate", f.ssc_rate);
    ts.num("earnings_test_threshold", f.earnings_test_threshold);
    ts.num("earnings_test_reduction", f.earnings_test_reduction);
    ts.num("inherit_exemption", f.inherit_exemption);
    ts.num("inherit_rate", f.inherit_rate);
    ts.num("b_floor", f.b_floor);
    ts.num("ebar", f.ebar);
    p.finalize();
    p.validate();

    GridSpec& g = cfg.grids;
    SectionReader gs = reader(m, "grids");
    gs.integer("na", g.na);
    gs.num("amax", g.amax);
    gs.num("acurve", g.acurve);
    gs.integer("ne", g.ne);
    gs.integer("nphi", g.nphi);
    gs.integer("neta", g.neta);
    if (gs.raw("hours", raw)) g.hours = parse_list(raw, "hours");
    std::sort(g.hours.begin(), g.hours.end());
    g.validate(p);

    PolicyRegime& r = cfg.regime;
    SectionReader rs = reader(m, "regime");
    rs.raw("name", r.name);
    rs.flag("earnings_test_enabled", r.earnings_test_enabled);
    rs.integer("early_period", r.early_period);
    rs.integer("normal_period", r.normal_period);
    rs.num("rho_multiplier", r.rho_multiplier);
    rs.num("tax_credit_multiplier", r.tax_credit_multiplier);
    rs.flag("pension_tax_exempt", r.pension_tax_exempt);
    auto read_override = [&](const std::string& k1, const std::string& k2,
                             std::optional<std::array<double, 2>>& out) {
        std::string v1, v2;
        bool h1 = rs.raw(k1, v1), h2 = rs.raw(k2, v2);
        if (h1 != h2) throw ConfigError("override keys '" + k1 + "' and '" + k2 + "' must appear together");
        if (h1) out = std::array<double, 2>{parse_double(v1, k1), parse_double(v2, k2)};
    };
    read_override("theta_override_NL", "theta_override_L", r.theta_override);
    read_override("pi_override_NL", "pi_override_L", r.pi_override);
    read_override("omega_override_NL", "omega_override_L", r.omega_override);
    r.validate();
    return cfg;
}

Config load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const Config& cfg) {
    const ModelParams& p = cfg.params;
    const FiscalRaw& f = p.fiscal_jpy;
    const GridSpec& g = cfg.grids;
    const PolicyRegime& r = cfg.regime;
    std::ostringstream out;
    out << "[params]\n";
    auto kv = [&out](const std::string& k, double v) { out << k << " = " << fmt_double(v) << "\n"; };
    auto kvi = [&out](const std::string& k, int v) { out << k << " = " << v << "\n"; };
    auto kvb = [&out](const std::string& k, bool v) { out << k << " = " << (v ? "true" : "false") << "\n"; };
    kv("sigma", p.sigma);
    kv("gamma", p.gamma);
    kv("beta", p.beta);
    kv("mu_phi", p.mu_phi);
    kv("delta_phi", p.delta_phi);
    kv("kappa", p.kappa);
    kv("xi", p.xi);
    kv("mu1", p.mu1);
    kv("mu2", p.mu2);
    kv("chi", p.chi);
    kv("theta_NL", p.theta[0]);
    kv("theta_L", p.theta[1]);
    kv("omega_NL", p.omega[0]);
    kv("omega_L", p.omega[1]);
    kv("pi_NL", p.pi[0]);
    kv("pi_L", p.pi[1]);
    kvi("xbar_NL", p.xbar[0]);
    kvi("xbar_L", p.xbar[1]);
    kvi("Rbar_NL", p.rbar[0]);
    kvi("Rbar_L", p.rbar[1]);
    kvi("R", p.R);
    kv("sigma_eta1", p.sigma_eta1);
    kvb("eta1_sigma_is_variance", p.eta1_sigma_is_variance);
    kv("alpha", p.alpha);
    kv("psi", p.psi);
    kv("nu", p.nu);
    kv("delta", p.delta);
    kv("A", p.A);
    kv("rho", p.rho);
    kv("p60_prob", p.p60_prob);
    kv("tau_r", p.tau_r);
    kvi("T_work_end", p.T_work_end);
    kvi("T_max", p.T_max);
    kvi("pension_e_update_end", p.pension_e_update_end);
    kv("hbar", p.hbar);
    kv("F", p.F);
    kv("unit_scale", p.unit_scale);
    out << "survival = " << fmt_list(p.survival) << "\n";
    out << "\n[tax_jpy]\n";
    out << "income_brackets = " << fmt_brackets(f.income_brackets) << "\n";
    kv("residence_rate", f.residence_rate);
    kv("basic_deduction", f.basic_deduction);
    out << "employment_deduction = " << fmt_deduction(f.employment_deduction) << "\n";
    kv("employment_deduction_floor", f.employment_deduction.floor_amount);
    out << "pension_deduction = " << fmt_deduction(f.pension_deduction) << "\n";
    kv("pension_deduction_floor", f.pension_deduction.floor_amount);
    kv("ssc_rate", f.ssc_rate);
    kv("earnings_test_threshold", f.earnings_test_threshold);
    kv("earnings_test_reduction", f.earnings_test_reduction);
    kv("inherit_exemption", f.inherit_exemption);
    kv("inherit_rate", f.inherit_rate);
    kv("b_floor", f.b_floor);
    kv("ebar", f.ebar);
    out << "\n[grids]\n";
    kvi("na", g.na);
    kv("amax", g.amax);
    kv("acurve", g.acurve);
    kvi("ne", g.ne);
    kvi("nphi", g.nphi);
    kvi("neta", g.neta);
    out << "hours = " << fmt_list(g.hours) << "\n";
    out << "\n[regime]\n";
    out << "name = " << r.name << "\n";
    kvb("earnings_test_enabled", r.earnings_test_enabled);
    kvi("early_period", r.early_period);
    kvi("normal_period", r.normal_period);
    kv("rho_multiplier", r.rho_multiplier);
    kv("tax_credit_multiplier", r.tax_credit_multiplier);
    kvb("pension_tax_exempt", r.pension_tax_exempt);
    if (r.theta_override) {
        kv("theta_override_NL", (*r.theta_override)[0]);
        kv("theta_override_L", (*r.theta_override)[1]);
    }
    if (r.pi_override) {
        kv("pi_override_NL", (*r.pi_override)[0]);
        kv("pi_override_L", (*r.pi_override)[1]);
    }
    if (r.omega_override) {
        kv("omega_override_NL", (*r.omega_override)[0]);
        kv("omega_override_L", (*r.omega_override)[1]);
    }
    return out.str();
}

void save_config(const Config& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file '" + path + "'");
    out << serialize_config(cfg);
}

} // namespace olg
