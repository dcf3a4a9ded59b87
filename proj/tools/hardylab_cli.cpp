// hardylab: command-line runner for the verification suites.
//
// Subcommands: beta, identity, sharpness, sobolev-null, eigen, l1.
// Every run writes one CSV or JSON report that embeds the fully resolved
// configuration and seed, so a report is reproducible from its own header.
// Exit codes: 0 = all checked invariants hold, 1 = an invariant is violated,
// 2 = usage error, 3 = numerical failure (solver stagnation, quadrature
// self-check failure).

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hardylab/constants.hpp"
#include "hardylab/discrete.hpp"
#include "hardylab/fields.hpp"
#include "hardylab/l1checks.hpp"
#include "hardylab/report.hpp"
#include "hardylab/testfunctions.hpp"

namespace {

namespace report = hardylab::report;
using hardylab::AlphaVector;
using hardylab::BetaVector;
using report::Cell;

struct GlobalOpts {
    std::string out;
    std::string format = "csv";
    int threads = 1;
    unsigned seed = 1;
};

std::string join(const std::vector<double>& v, const char* sep) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += report::format_double(v[i]);
    }
    return s;
}

// Compact vector text for config echoes and parameter cells: "(0,-0.5,1)".
std::string paren(const std::vector<double>& v) { return "(" + join(v, ",") + ")"; }

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void require_finite(const std::vector<double>& v, const std::string& flag) {
    require(!v.empty(), flag + ": vector must be nonempty");
    require(v.size() <= 16, flag + ": at most 16 entries supported");
    for (double x : v) require(std::isfinite(x), flag + ": entries must be finite");
}

// Default output directory for relative --out paths.
std::string resolve_out(const std::string& out) {
    if (out.empty()) return out;
    std::filesystem::path p(out);
    if (p.is_absolute()) return out;
    if (const char* dir = std::getenv("HARDYLAB_OUT"); dir && *dir)
        return (std::filesystem::path(dir) / p).string();
    return out;
}

report::ConfigEcho base_echo(const GlobalOpts& g, const std::string& command) {
    return {{"command", command},
            {"seed", std::to_string(g.seed)},
            {"threads", std::to_string(g.threads)},
            {"format", g.format}};
}

int emit(const GlobalOpts& g, const report::Table& table, report::ConfigEcho echo,
         bool pass) {
    const std::string verdict = pass ? "pass" : "fail";
    std::string content;
    if (g.format == "json") {
        content = report::to_json(table, echo, verdict);
    } else {
        echo.emplace_back("verdict", verdict);
        content = report::to_csv(table, echo);
    }
    const std::string path = resolve_out(g.out);
    if (path.empty()) {
        std::cout << content;
    } else {
        if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty())
            std::filesystem::create_directories(parent);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f << content;
        if (!f.good()) throw std::runtime_error("write failed: " + path);
        std::cerr << "wrote " << path << "\n";
    }
    std::cerr << "verdict: " << verdict << "\n";
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// beta: constant calculus for one generator or coefficient vector
// ---------------------------------------------------------------------------

struct BetaOpts {
    std::vector<double> alpha, beta;
    bool check = false;
};

int cmd_beta(const GlobalOpts& g, const BetaOpts& o) {
    require(o.alpha.empty() != o.beta.empty(),
            "beta: provide exactly one of --alpha or --beta");

    AlphaVector canon;
    BetaVector beta;
    bool admissible = false;
    int failed_index = 0;
    double roundtrip_err = 0.0;

    report::ConfigEcho echo = base_echo(g, "beta");
    if (!o.alpha.empty()) {
        require_finite(o.alpha, "--alpha");
        AlphaVector a{o.alpha};
        beta = hardylab::alpha_to_beta(a);
        canon = hardylab::normalize_alpha(a);
        admissible = true;
        echo.emplace_back("mode", "alpha");
        echo.emplace_back("alpha", paren(o.alpha));
    } else {
        require_finite(o.beta, "--beta");
        beta.v = o.beta;
        auto adm = hardylab::beta_admissible(beta);
        admissible = adm.admissible;
        failed_index = adm.failed_index;
        if (admissible) canon = *adm.alpha;
        echo.emplace_back("mode", "beta");
        echo.emplace_back("beta", paren(o.beta));
    }
    const int n = static_cast<int>(beta.v.size());

    hardylab::GammaVector gamma;
    hardylab::SigmaAndC sc;
    bool has_sigma = false;
    if (admissible) {
        gamma = hardylab::gamma_from_alpha(canon);
        if (n >= 3) {
            sc = hardylab::sigma_and_c(gamma, n);
            has_sigma = true;
        }
        if (o.check) {
            auto back = hardylab::alpha_to_beta(canon);
            for (int m = 0; m < n; ++m)
                roundtrip_err = std::max(roundtrip_err, std::abs(back.v[m] - beta.v[m]));
        }
    }

    echo.emplace_back("n", std::to_string(n));
    echo.emplace_back("admissible", admissible ? "yes" : "no");
    echo.emplace_back("failed_index", std::to_string(failed_index));
    echo.emplace_back("sobolev_remainder",
                      admissible ? (hardylab::sobolev_remainder(canon) ? "yes" : "no")
                                 : "n/a");
    if (has_sigma)
        echo.emplace_back("step_constants_usable", sc.step_constants_usable ? "yes" : "no");
    if (o.check && admissible)
        echo.emplace_back("roundtrip_max_error", report::format_double(roundtrip_err));

    report::Table t;
    t.columns = {"index", "alpha", "beta", "gamma", "sigma", "c"};
    for (int m = 0; m < n; ++m) {
        std::vector<Cell> row;
        row.emplace_back(static_cast<long long>(m + 1));
        row.emplace_back(admissible ? Cell(canon.v[m]) : Cell(std::string()));
        row.emplace_back(beta.v[m]);
        row.emplace_back(admissible ? Cell(gamma.v[m]) : Cell(std::string()));
        row.emplace_back(has_sigma ? Cell(sc.sigma.v[m]) : Cell(std::string()));
        row.emplace_back(has_sigma ? Cell(sc.c[m]) : Cell(std::string()));
        t.add_row(std::move(row));
    }
    // Admissibility is a finding, not a failure: the status lives in the
    // config echo and the exit code stays 0 unless something actually broke.
    return emit(g, t, echo, true);
}

// ---------------------------------------------------------------------------
// identity: pointwise drift-potential identity residuals at random samples
// ---------------------------------------------------------------------------

struct IdentityOpts {
    int n = 0;         // 0 = full default sweep
    int samples = 1000;
    bool quarter = false;
    int k = 0;         // 0 = all of {1,2,3} in quarter mode
    double tol = 1e-10;
};

std::vector<double> draw_point(std::mt19937& rng, int n, int positive) {
    // First coordinate(s) >= 0.05 keep every prefix norm that far from the
    // singular set, so no rejection loop is needed.
    std::uniform_real_distribution<double> pos(0.05, 3.0), any(-3.0, 3.0);
    std::vector<double> x(n);
    for (int d = 0; d < n; ++d) x[d] = d < positive ? pos(rng) : any(rng);
    return x;
}

int cmd_identity(const GlobalOpts& g, const IdentityOpts& o) {
    require(o.samples >= 1 && o.samples <= 10000000, "identity: --samples in [1, 1e7]");
    require(o.tol > 0, "identity: --tol must be positive");
    require(o.n == 0 || (o.n >= 2 && o.n <= 6), "identity: --n in [2, 6]");

    std::mt19937 rng(g.seed);
    std::uniform_real_distribution<double> alpha_draw(-2.0, 0.0);

    report::Table t;
    t.columns = {"domain", "n", "k", "samples", "max_residual"};
    double worst = 0.0;

    if (o.quarter) {
        const int n = o.n == 0 ? 3 : o.n;
        std::vector<int> ks;
        if (o.k == 0)
            for (int k = 1; k <= std::min(3, n); ++k) ks.push_back(k);
        else
            ks.push_back(o.k);
        for (int k : ks) {
            require(k >= 1 && k <= n, "identity: --k in [1, n]");
            auto spec = hardylab::fields::quarter_space_field(k);
            double mx = 0.0;
            for (int s = 0; s < o.samples; ++s) {
                hardylab::fields::Point p{draw_point(rng, n, k),
                                          hardylab::fields::Domain::QuarterSpace, k};
                mx = std::max(mx, hardylab::fields::identity_residual(spec, p));
            }
            worst = std::max(worst, mx);
            t.add_row({Cell(std::string("quarter")), Cell(static_cast<long long>(n)),
                       Cell(static_cast<long long>(k)), Cell(static_cast<long long>(o.samples)),
                       Cell(mx)});
        }
    } else {
        std::vector<int> ns;
        if (o.n == 0)
            ns = {2, 3, 4, 5};
        else
            ns.push_back(o.n);
        for (int n : ns) {
            double mx = 0.0;
            for (int s = 0; s < o.samples; ++s) {
                AlphaVector a;
                a.v.resize(n);
                for (double& ai : a.v) ai = alpha_draw(rng);
                auto spec = hardylab::fields::half_space_field(a);
                hardylab::fields::Point p{draw_point(rng, n, 1),
                                          hardylab::fields::Domain::HalfSpace, 1};
                mx = std::max(mx, hardylab::fields::identity_residual(spec, p));
            }
            worst = std::max(worst, mx);
            t.add_row({Cell(std::string("half")), Cell(static_cast<long long>(n)),
                       Cell(0LL), Cell(static_cast<long long>(o.samples)), Cell(mx)});
        }
    }

    report::ConfigEcho echo = base_echo(g, "identity");
    echo.emplace_back("domain", o.quarter ? "quarter" : "half");
    echo.emplace_back("n", std::to_string(o.n));
    echo.emplace_back("k", std::to_string(o.k));
    echo.emplace_back("samples", std::to_string(o.samples));
    echo.emplace_back("tol", report::format_double(o.tol));
    echo.emplace_back("max_residual", report::format_double(worst));
    return emit(g, t, echo, worst <= o.tol);
}

// ---------------------------------------------------------------------------
// shared table shape for the quotient suites
// ---------------------------------------------------------------------------

std::vector<std::string> quotient_columns(int n) {
    std::vector<std::string> cols = {"family", "q", "n"};
    for (int i = 1; i <= n; ++i) cols.push_back("alpha" + std::to_string(i));
    for (const char* c : {"k_or_eps", "numerator", "denominator", "value",
                          "resolution", "error_estimate"})
        cols.emplace_back(c);
    return cols;
}

void add_quotient_row(report::Table& t, const hardylab::testfn::QuotientReport& rep,
                      const std::vector<double>& alpha_echo, int n) {
    std::vector<Cell> row{Cell(rep.family), Cell(static_cast<long long>(rep.q)),
                          Cell(static_cast<long long>(n))};
    for (int i = 0; i < n; ++i)
        row.emplace_back(i < static_cast<int>(alpha_echo.size()) ? Cell(alpha_echo[i])
                                                                 : Cell(std::string()));
    row.emplace_back(rep.k_or_eps);
    row.emplace_back(rep.numerator);
    row.emplace_back(rep.denominator);
    row.emplace_back(rep.value);
    row.emplace_back(static_cast<long long>(rep.resolution));
    row.emplace_back(rep.error_estimate);
    t.add_row(std::move(row));
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// sharpness: cutoff-family quotient schedules
// ---------------------------------------------------------------------------

struct SharpnessOpts {
    int q = 1;
    int n = 3;
    std::vector<double> ks = {1e2, 1e3, 1e4, 1e5};
    std::vector<double> alpha, beta_tail;
    double k1 = hardylab::testfn::kNoCutoff;
    bool direct = false;
    int angular = 48;
    int radial = 32;
    double scale = 1.0;
};

int cmd_sharpness(const GlobalOpts& g, const SharpnessOpts& o) {
    require(!o.ks.empty(), "sharpness: --ks must be nonempty");
    for (double k : o.ks) require(std::isfinite(k) && k > 1.0, "sharpness: schedule entries must exceed 1");
    require(o.q >= 1, "sharpness: --q must be >= 1");
    require(o.angular >= 8 && o.angular <= 512 && o.radial >= 8 && o.radial <= 512,
            "sharpness: resolution out of range [8, 512]");
    require(o.scale > 0 && std::isfinite(o.scale), "sharpness: --scale must be positive");
    require(o.k1 > 1.0, "sharpness: --k1 must exceed 1");

    hardylab::testfn::Resolution res{o.angular, o.radial, g.threads};
    report::ConfigEcho echo = base_echo(g, "sharpness");
    echo.emplace_back("q", std::to_string(o.q));
    echo.emplace_back("ks", paren(o.ks));

    std::vector<hardylab::testfn::QuotientReport> reps;
    std::vector<double> alpha_echo;
    int n = o.n;
    double cap = 0.25;

    if (o.q == 1) {
        require(o.alpha.empty() || o.beta_tail.empty(),
                "sharpness: --alpha and --beta-tail are mutually exclusive");
        require(!o.direct, "sharpness: --direct requires --q >= 2");
        BetaVector tail;
        if (!o.beta_tail.empty()) {
            require_finite(o.beta_tail, "--beta-tail");
            tail.v = o.beta_tail;
            n = static_cast<int>(tail.v.size()) + 1;
            // Echo the generator behind (1/4, tail) when one exists.
            BetaVector full;
            full.v.push_back(0.25);
            full.v.insert(full.v.end(), tail.v.begin(), tail.v.end());
            if (auto adm = hardylab::beta_admissible(full); adm.admissible)
                alpha_echo = adm.alpha->v;
            echo.emplace_back("beta_tail", paren(o.beta_tail));
        } else {
            std::vector<double> avals = o.alpha;
            if (avals.empty()) avals.assign(static_cast<size_t>(o.n), 0.0);
            require_finite(avals, "--alpha");
            n = static_cast<int>(avals.size());
            auto beta = hardylab::alpha_to_beta(AlphaVector{avals});
            tail.v.assign(beta.v.begin() + 1, beta.v.end());
            alpha_echo = hardylab::normalize_alpha(AlphaVector{avals}).v;
            echo.emplace_back("alpha", paren(avals));
        }
        require(n >= 2 && n <= 6, "sharpness: dimension out of range [2, 6]");
        cap = 0.25;
        for (double k : o.ks) reps.push_back(hardylab::testfn::quotient_step1(tail, k, res, o.scale));
    } else {
        require(!o.alpha.empty(), "sharpness: --alpha is required for --q >= 2");
        require(o.beta_tail.empty(), "sharpness: --beta-tail applies to --q 1 only");
        require_finite(o.alpha, "--alpha");
        n = static_cast<int>(o.alpha.size());
        require(n >= 3 && n <= 6, "sharpness: dimension out of range [3, 6]");
        require(o.q <= n, "sharpness: --q must be <= the length of --alpha");
        if (o.direct)
            require(std::isfinite(o.k1), "sharpness: --direct needs a finite --k1");
        AlphaVector a{o.alpha};
        alpha_echo = hardylab::normalize_alpha(a).v;
        // Ceiling of the recursion at step q when the q-th generator entry
        // vanishes: (a_{q-1} - 1/2)^2.
        cap = (0.5 - alpha_echo[static_cast<size_t>(o.q) - 2]) *
              (0.5 - alpha_echo[static_cast<size_t>(o.q) - 2]);
        echo.emplace_back("alpha", paren(o.alpha));
        for (double k : o.ks)
            reps.push_back(o.direct
                               ? hardylab::testfn::quotient_general_direct(o.q, a, o.k1, k, res, o.scale)
                               : hardylab::testfn::quotient_general(o.q, a, o.k1, k, res, o.scale));
    }

    echo.emplace_back("n", std::to_string(n));
    echo.emplace_back("k1", report::format_double(o.k1));
    echo.emplace_back("direct", o.direct ? "yes" : "no");
    echo.emplace_back("angular", std::to_string(o.angular));
    echo.emplace_back("radial", std::to_string(o.radial));
    echo.emplace_back("scale", report::format_double(o.scale));
    echo.emplace_back("target", report::format_double(cap));

    report::Table t;
    t.columns = quotient_columns(n);
    std::vector<double> values;
    int flagged = 0;
    for (const auto& rep : reps) {
        add_quotient_row(t, rep, alpha_echo, n);
        values.push_back(rep.value);
        flagged += rep.flagged ? 1 : 0;
    }
    echo.emplace_back("flagged_rows", std::to_string(flagged));

    bool pass = strictly_decreasing(values) && flagged == 0;
    for (double v : values) pass = pass && v >= cap - 1e-3;
    return emit(g, t, echo, pass);
}

// ---------------------------------------------------------------------------
// sobolev-null: critical-norm quotient schedule in the concentration scale
// ---------------------------------------------------------------------------

struct SobolevNullOpts {
    std::vector<double> alpha = {0.0, 0.0, 0.0};
    std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    double k1 = hardylab::testfn::kNoCutoff;
    int angular = 48;
    int radial = 32;
    double scale = 1.0;
};

int cmd_sobolev_null(const GlobalOpts& g, const SobolevNullOpts& o) {
    require_finite(o.alpha, "--alpha");
    const int n = static_cast<int>(o.alpha.size());
    require(n >= 3 && n <= 6, "sobolev-null: dimension out of range [3, 6]");
    require(!o.eps.empty(), "sobolev-null: --eps must be nonempty");
    for (double e : o.eps) require(e > 0 && e <= 0.5, "sobolev-null: eps entries in (0, 0.5]");
    require(strictly_decreasing(o.eps) || o.eps.size() == 1,
            "sobolev-null: --eps must be strictly decreasing");
    require(o.angular >= 8 && o.angular <= 512 && o.radial >= 8 && o.radial <= 512,
            "sobolev-null: resolution out of range [8, 512]");
    require(o.k1 > 1.0, "sobolev-null: --k1 must exceed 1");

    hardylab::testfn::Resolution res{o.angular, o.radial, g.threads};
    AlphaVector a{o.alpha};
    std::vector<double> alpha_echo = hardylab::normalize_alpha(a).v;

    report::Table t;
    t.columns = quotient_columns(n);
    std::vector<double> values;
    int flagged = 0;
    for (double eps : o.eps) {
        auto rep = hardylab::testfn::sobolev_null_quotient(a, eps, o.k1, res, o.scale);
        add_quotient_row(t, rep, alpha_echo, n);
        values.push_back(rep.value);
        flagged += rep.flagged ? 1 : 0;
    }

    // Least-squares slope of log(value) against log(eps): positive when the
    // quotient decays to zero with the concentration scale.
    double slope = 0.0;
    if (values.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(values.size());
        for (size_t i = 0; i < values.size(); ++i) {
            const double x = std::log(o.eps[i]), y = std::log(values[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }

    report::ConfigEcho echo = base_echo(g, "sobolev-null");
    echo.emplace_back("alpha", paren(o.alpha));
    echo.emplace_back("eps", paren(o.eps));
    echo.emplace_back("n", std::to_string(n));
    echo.emplace_back("k1", report::format_double(o.k1));
    echo.emplace_back("angular", std::to_string(o.angular));
    echo.emplace_back("radial", std::to_string(o.radial));
    echo.emplace_back("scale", report::format_double(o.scale));
    echo.emplace_back("flagged_rows", std::to_string(flagged));
    echo.emplace_back("loglog_slope", report::format_double(slope));

    const bool pass = strictly_decreasing(values) && flagged == 0;
    return emit(g, t, echo, pass);
}

// ---------------------------------------------------------------------------
// eigen: discrete Rayleigh ladders and positivity probes
// ---------------------------------------------------------------------------

struct EigenOpts {
    int n = 3;
    int k = 1;
    double L = 4.0;
    int div0 = 2;
    int refine = 3;
    int div = 8;  // psd mode mesh resolution
    std::vector<double> psd_alpha, psd_beta;
    int psd_quarter = 0;
    double psd_scale = 1.0;
};

int64_t mesh_dof(int n, int div) {
    int64_t dof = div - 1;
    for (int d = 1; d < n; ++d) dof *= 2 * div - 1;
    return dof;
}

int cmd_eigen(const GlobalOpts& g, const EigenOpts& o) {
    require(o.n >= 2 && o.n <= 4, "eigen: --n in [2, 4]");
    require(o.L > 0 && std::isfinite(o.L), "eigen: --L must be positive");

    const int psd_modes = (!o.psd_alpha.empty() ? 1 : 0) + (!o.psd_beta.empty() ? 1 : 0) +
                          (o.psd_quarter > 0 ? 1 : 0);
    require(psd_modes <= 1,
            "eigen: --psd-alpha, --psd-beta and --psd-quarter are mutually exclusive");

    report::Table t;
    t.columns = {"n", "k_or_beta", "L", "h", "lambda", "residual", "iterations"};
    report::ConfigEcho echo = base_echo(g, "eigen");
    echo.emplace_back("n", std::to_string(o.n));
    echo.emplace_back("L", report::format_double(o.L));

    if (psd_modes == 1) {
        require(o.div >= 2 && o.div <= 64, "eigen: --div in [2, 64]");
        require(mesh_dof(o.n, o.div) <= 400000, "eigen: mesh too large for a desk run");
        require(o.psd_scale > 0 && std::isfinite(o.psd_scale), "eigen: --psd-scale must be positive");
        echo.emplace_back("mode", "psd");
        echo.emplace_back("div", std::to_string(o.div));

        hardylab::fem::EigenResult r;
        std::string label;
        if (o.psd_quarter > 0) {
            require(o.psd_quarter <= o.n, "eigen: --psd-quarter must be <= n");
            auto mesh = hardylab::fem::make_box_mesh(o.n, o.L, o.div, o.psd_quarter);
            r = hardylab::fem::quarter_psd_check(mesh, o.psd_scale);
            label = "quarter-k=" + std::to_string(o.psd_quarter);
            if (o.psd_scale != 1.0) label += ";scale=" + report::format_double(o.psd_scale);
            echo.emplace_back("quarter_k", std::to_string(o.psd_quarter));
            echo.emplace_back("potential_scale", report::format_double(o.psd_scale));
        } else {
            BetaVector beta;
            if (!o.psd_alpha.empty()) {
                require_finite(o.psd_alpha, "--psd-alpha");
                require(static_cast<int>(o.psd_alpha.size()) == o.n,
                        "eigen: --psd-alpha length must equal --n");
                beta = hardylab::alpha_to_beta(AlphaVector{o.psd_alpha});
                echo.emplace_back("alpha", paren(o.psd_alpha));
            } else {
                require_finite(o.psd_beta, "--psd-beta");
                require(static_cast<int>(o.psd_beta.size()) == o.n,
                        "eigen: --psd-beta length must equal --n");
                beta.v = o.psd_beta;
            }
            echo.emplace_back("beta", paren(beta.v));
            auto mesh = hardylab::fem::make_box_mesh(o.n, o.L, o.div, 1);
            r = hardylab::fem::psd_check(mesh, beta);
            label = "beta=" + join(beta.v, ";");
        }
        t.add_row({Cell(static_cast<long long>(o.n)), Cell(label), Cell(o.L),
                   Cell(o.L / o.div), Cell(r.value), Cell(r.residual),
                   Cell(static_cast<long long>(r.iterations))});
        echo.emplace_back("min_eig", report::format_double(r.value));
        return emit(g, t, echo, r.value >= -1e-8);
    }

    // Rayleigh ladder for the prefix-norm weight |X_k|^{-2}.
    require(o.k >= 1 && o.k <= o.n, "eigen: --k in [1, n]");
    require(o.div0 >= 2 && o.div0 <= 64, "eigen: --div0 in [2, 64]");
    require(o.refine >= 0 && o.refine <= 6, "eigen: --refine in [0, 6]");
    const int max_div = o.div0 << o.refine;
    require(max_div <= 128 && mesh_dof(o.n, max_div) <= 400000,
            "eigen: refinement ladder too large for a desk run");
    echo.emplace_back("mode", "rayleigh");
    echo.emplace_back("k", std::to_string(o.k));
    echo.emplace_back("div0", std::to_string(o.div0));
    echo.emplace_back("refine", std::to_string(o.refine));

    const double floor = 0.25 * o.k * o.k;
    std::vector<double> lambdas;
    for (int i = 0; i <= o.refine; ++i) {
        const int div = o.div0 << i;
        auto mesh = hardylab::fem::make_box_mesh(o.n, o.L, div, 1);
        auto stiff = hardylab::fem::assemble_stiffness(mesh);
        auto weight = hardylab::fem::assemble_weight_mass(mesh, o.k);
        auto r = hardylab::fem::min_rayleigh(stiff, weight);
        lambdas.push_back(r.value);
        t.add_row({Cell(static_cast<long long>(o.n)), Cell(std::to_string(o.k)), Cell(o.L),
                   Cell(mesh.h), Cell(r.value), Cell(r.residual),
                   Cell(static_cast<long long>(r.iterations))});
    }
    echo.emplace_back("lower_bound", report::format_double(floor));

    bool pass = true;
    for (double l : lambdas) pass = pass && l >= floor - 1e-8;
    for (size_t i = 1; i < lambdas.size(); ++i)
        pass = pass && lambdas[i] <= lambdas[i - 1] + 1e-12;
    return emit(g, t, echo, pass);
}

// ---------------------------------------------------------------------------
// l1: weighted L1 inequality sweep over the sample library
// ---------------------------------------------------------------------------

struct L1Opts {
    int n = 3;
    int count = 200;
    int rule = 32;
    int trend = 6;
};

int cmd_l1(const GlobalOpts& g, const L1Opts& o) {
    namespace l1 = hardylab::l1;
    require(o.n == 3, "l1: only --n 3 is supported");
    require(o.count >= 20 && o.count <= 1000, "l1: --count in [20, 1000]");
    require(o.rule >= 2 && o.rule <= 200, "l1: --rule in [2, 200]");
    require(o.trend >= 1 && o.trend <= 10, "l1: --trend in [1, 10]");

    const auto library = l1::make_sample_library(o.n, g.seed, 20, o.count - 20, 1);
    const auto quarter_library =
        l1::make_sample_library(o.n, g.seed + 1, 20, 30, 2);

    report::Table t;
    t.columns = {"check", "parameters", "lhs", "rhs", "slack", "resolution"};

    double min_rel_slack = std::numeric_limits<double>::infinity();
    auto add_check = [&](const std::string& name, const std::string& params,
                         const l1::CheckResult& r, bool counts_toward_verdict) {
        t.add_row({Cell(name), Cell(params), Cell(r.lhs), Cell(r.rhs), Cell(r.slack()),
                   Cell(static_cast<long long>(r.resolution))});
        if (counts_toward_verdict && !r.skipped && r.rhs > 0)
            min_rel_slack = std::min(min_rel_slack, r.slack() / r.rhs);
    };

    // Divergence inequality for the single-component power field.
    l1::StepField pow_field{1, {2.0}};
    for (const auto& v : library)
        add_check("div", "field=step;l=1;sigma=(2);v=" + v.name,
                  l1::div_ineq_check(pow_field, v, o.rule), true);

    // Step inequalities with their divergence constants.
    hardylab::SigmaVector s21{{2.0, 1.0}};
    hardylab::SigmaVector s111{{1.0, 1.0, 1.0}};
    for (const auto& v : library) {
        add_check("step", "l=2;sigma=(2,1);v=" + v.name,
                  l1::step_inequality_check(2, s21, v, o.rule), true);
        add_check("step", "l=3;sigma=(1,1,1);v=" + v.name,
                  l1::step_inequality_check(3, s111, v, o.rule), true);
    }

    // Divergence inequality for the ground-state drift fields used elsewhere.
    AlphaVector a0{std::vector<double>(static_cast<size_t>(o.n), 0.0)};
    const auto half_drift = hardylab::fields::half_space_field(a0);
    for (const auto& v : library)
        add_check("div", "field=half-drift;alpha=" + paren(a0.v) + ";v=" + v.name,
                  l1::div_ineq_check(half_drift, v, o.rule), true);
    const auto quarter_drift = hardylab::fields::quarter_space_field(2);
    for (const auto& v : quarter_library)
        add_check("div", "field=quarter-drift;k=2;v=" + v.name,
                  l1::div_ineq_check(quarter_drift, v, o.rule), true);

    // Degenerate-step boundary: the constant vanishes while the last exponent
    // does not, so the check must refuse rather than report a vacuous 0 <= rhs.
    bool refused = false;
    try {
        hardylab::SigmaVector bad{{-2.0, 1.0}};
        l1::step_inequality_check(2, bad, library[1], o.rule);
    } catch (const std::domain_error&) {
        refused = true;
    }
    t.add_row({Cell(std::string("step-refused")), Cell(std::string("l=2;sigma=(-2,1)")),
               Cell(0.0), Cell(0.0), Cell(0.0), Cell(static_cast<long long>(o.rule))});

    // Vanishing last exponent: the step contributes nothing and is skipped.
    hardylab::SigmaVector s20{{2.0, 0.0}};
    auto skip = l1::step_inequality_check(2, s20, library[1], o.rule);
    add_check("step-skipped", "l=2;sigma=(2,0);v=" + library[1].name, skip, false);

    // Weighted L1 hypothesis ratios for the ground-state weight: the critical
    // generator (last entry 0) against a strictly subcritical companion.
    double max_ratio = 0.0;
    AlphaVector a_sub{{0.0, 0.0, -0.5}};
    const auto phi_crit = half_drift;
    const auto phi_sub = hardylab::fields::half_space_field(a_sub);
    for (const auto& v : library) {
        auto rc = l1::thmC_hypothesis_check(phi_crit, v, o.rule);
        if (!rc.skipped) max_ratio = std::max(max_ratio, rc.ratio);
        add_check("hypothesis", "alpha=" + paren(a0.v) + ";v=" + v.name, rc, false);
        auto rs = l1::thmC_hypothesis_check(phi_sub, v, o.rule);
        add_check("hypothesis", "alpha=" + paren(a_sub.v) + ";v=" + v.name, rs, false);
    }

    // Concentration trend: ratios along shells shrinking toward the origin.
    // Reported against the reference constant 1 (lhs = ratio, rhs = 1).
    for (const AlphaVector& a : {a0, a_sub}) {
        auto ratios = l1::thmC_concentration_ratios(a, o.trend);
        for (size_t j = 0; j < ratios.size(); ++j)
            t.add_row({Cell(std::string("hypothesis-trend")),
                       Cell("alpha=" + paren(a.v) + ";j=" + std::to_string(j)),
                       Cell(ratios[j]), Cell(1.0), Cell(1.0 - ratios[j]), Cell(40LL)});
    }

    report::ConfigEcho echo = base_echo(g, "l1");
    echo.emplace_back("n", std::to_string(o.n));
    echo.emplace_back("count", std::to_string(o.count));
    echo.emplace_back("rule", std::to_string(o.rule));
    echo.emplace_back("trend", std::to_string(o.trend));
    echo.emplace_back("min_relative_slack", report::format_double(min_rel_slack));
    echo.emplace_back("degenerate_step_refused", refused ? "yes" : "no");
    echo.emplace_back("max_hypothesis_ratio", report::format_double(max_ratio));

    const bool pass = refused && skip.skipped && min_rel_slack >= -1e-6;
    return emit(g, t, echo, pass);
}

}  // namespace

int main(int argc, char** argv) {
    GlobalOpts g;
    BetaOpts beta_opts;
    IdentityOpts id_opts;
    SharpnessOpts sh_opts;
    SobolevNullOpts sn_opts;
    EigenOpts eig_opts;
    L1Opts l1_opts;

    CLI::App app{"Numerical verification suites for weighted Hardy inequalities on "
                 "half-spaces and quarter-spaces"};
    app.set_version_flag("--version", "hardylab 1.0.0");
    app.set_config("--config", "", "flat key=value file; flags override file values");
    app.require_subcommand(1);
    app.fallthrough();  // global flags are accepted after the subcommand too

    app.add_option("--out", g.out,
                   "output file (default: stdout); relative paths resolve under "
                   "$HARDYLAB_OUT when set");
    app.add_option("--format", g.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--threads", g.threads, "worker cap for quadrature")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    app.add_option("--seed", g.seed, "seed for all randomized draws")
        ->capture_default_str();

    auto* beta_cmd = app.add_subcommand(
        "beta", "coefficient calculus: generator -> coefficients, admissibility, "
                "weight exponents");
    beta_cmd->add_option("--alpha", beta_opts.alpha, "generator entries a_1,..,a_n")
        ->delimiter(',');
    beta_cmd->add_option("--beta", beta_opts.beta, "coefficient entries b_1,..,b_n")
        ->delimiter(',');
    beta_cmd->add_flag("--check", beta_opts.check,
                       "verify the reconstructed generator reproduces the input");

    auto* id_cmd = app.add_subcommand(
        "identity", "pointwise drift-potential identity residuals at seeded points");
    id_cmd->add_option("--n", id_opts.n, "dimension (0 = sweep 2..5)")->capture_default_str();
    id_cmd->add_option("--samples", id_opts.samples, "points per row")->capture_default_str();
    id_cmd->add_flag("--quarter", id_opts.quarter, "quarter-space fields instead of half-space");
    id_cmd->add_option("--k", id_opts.k, "quarter prefix count (0 = sweep 1..3)")
        ->capture_default_str();
    id_cmd->add_option("--tol", id_opts.tol, "max allowed residual")->capture_default_str();

    auto* sh_cmd = app.add_subcommand(
        "sharpness", "cutoff-family quotient schedule approaching the best constant");
    sh_cmd->add_option("--q", sh_opts.q, "denominator prefix index")->capture_default_str();
    sh_cmd->add_option("--n", sh_opts.n, "dimension (families with --beta-tail/--alpha "
                                         "infer it from the vector length)")
        ->capture_default_str();
    sh_cmd->add_option("--ks", sh_opts.ks, "cutoff scale schedule")
        ->delimiter(',')
        ->capture_default_str();
    sh_cmd->add_option("--alpha", sh_opts.alpha, "generator entries")->delimiter(',');
    sh_cmd->add_option("--beta-tail", sh_opts.beta_tail,
                       "subtracted tail coefficients (q = 1 only)")
        ->delimiter(',');
    sh_cmd->add_option("--k1", sh_opts.k1, "inner cutoff scale (default: analytic limit)");
    sh_cmd->add_flag("--direct", sh_opts.direct,
                     "evaluate the unsubstituted quotient (needs finite --k1)");
    sh_cmd->add_option("--angular", sh_opts.angular, "angular Gauss points")
        ->capture_default_str();
    sh_cmd->add_option("--radial", sh_opts.radial, "radial Gauss points per piece")
        ->capture_default_str();
    sh_cmd->add_option("--scale", sh_opts.scale, "test-function dilation")
        ->capture_default_str();

    auto* sn_cmd = app.add_subcommand(
        "sobolev-null", "critical-norm quotient along the concentration scale");
    sn_cmd->add_option("--alpha", sn_opts.alpha, "generator entries")
        ->delimiter(',')
        ->capture_default_str();
    sn_cmd->add_option("--eps", sn_opts.eps, "concentration schedule, strictly decreasing")
        ->delimiter(',')
        ->capture_default_str();
    sn_cmd->add_option("--k1", sn_opts.k1, "inner cutoff scale (default: analytic limit)");
    sn_cmd->add_option("--angular", sn_opts.angular, "angular Gauss points")
        ->capture_default_str();
    sn_cmd->add_option("--radial", sn_opts.radial, "radial Gauss points per piece")
        ->capture_default_str();
    sn_cmd->add_option("--scale", sn_opts.scale, "test-function dilation")
        ->capture_default_str();

    auto* eig_cmd = app.add_subcommand(
        "eigen", "discrete Rayleigh ladder or operator positivity probe");
    eig_cmd->add_option("--n", eig_opts.n, "dimension")->capture_default_str();
    eig_cmd->add_option("--k", eig_opts.k, "prefix-norm weight index")->capture_default_str();
    eig_cmd->add_option("--L", eig_opts.L, "box half-width")->capture_default_str();
    eig_cmd->add_option("--div0", eig_opts.div0, "coarsest cells per positive axis")
        ->capture_default_str();
    eig_cmd->add_option("--refine", eig_opts.refine, "number of mesh doublings")
        ->capture_default_str();
    eig_cmd->add_option("--div", eig_opts.div, "cells per positive axis (positivity mode)")
        ->capture_default_str();
    eig_cmd->add_option("--psd-alpha", eig_opts.psd_alpha,
                        "positivity probe for the coefficients generated by this alpha")
        ->delimiter(',');
    eig_cmd->add_option("--psd-beta", eig_opts.psd_beta,
                        "positivity probe for these coefficients (admissible or not)")
        ->delimiter(',');
    eig_cmd->add_option("--psd-quarter", eig_opts.psd_quarter,
                        "positivity probe for the quarter-space potential with this k");
    eig_cmd->add_option("--psd-scale", eig_opts.psd_scale,
                        "scale on the quarter-space potential (>1 probes failure)")
        ->capture_default_str();

    auto* l1_cmd = app.add_subcommand(
        "l1", "weighted L1 inequality sweep over the seeded sample library");
    l1_cmd->add_option("--n", l1_opts.n, "dimension")->capture_default_str();
    l1_cmd->add_option("--count", l1_opts.count, "library size")->capture_default_str();
    l1_cmd->add_option("--rule", l1_opts.rule, "Gauss points per axis")->capture_default_str();
    l1_cmd->add_option("--trend", l1_opts.trend, "concentration sequence length")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(beta_cmd)) return cmd_beta(g, beta_opts);
        if (app.got_subcommand(id_cmd)) return cmd_identity(g, id_opts);
        if (app.got_subcommand(sh_cmd)) return cmd_sharpness(g, sh_opts);
        if (app.got_subcommand(sn_cmd)) return cmd_sobolev_null(g, sn_opts);
        if (app.got_subcommand(eig_cmd)) return cmd_eigen(g, eig_opts);
        if (app.got_subcommand(l1_cmd)) return cmd_l1(g, l1_opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
