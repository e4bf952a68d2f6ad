// isoharm command-line tool: classification, thresholds, bounds, residual
// scans, and finite-difference verification for proper r-harmonic
// isoparametric hypersurfaces of the unit sphere. Output is JSON or CSV with
// stable formatting, so identical invocations produce identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "isoharm/criterion.hpp"
#include "isoharm/emit.hpp"
#include "isoharm/errors.hpp"
#include "isoharm/family.hpp"
#include "isoharm/geomlab.hpp"
#include "isoharm/quartic.hpp"
#include "isoharm/rational.hpp"
#include "isoharm/thresholds.hpp"
#include "isoharm/version.hpp"

namespace {

using isoharm::Int;
using isoharm::Rat;
using Json = isoharm::emit::Json;

// --------------------------------------------------------------- output

struct IoOpts {
    std::string format = "json";
    std::string output;
};

void add_io(CLI::App* cmd, IoOpts& io) {
    cmd->add_option("--format", io.format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--output", io.output, "Write to this file instead of stdout");
}

struct CsvTable {
    std::string note; // rendered as a leading "# ..." schema line
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string fd(double v) { return isoharm::emit::format_double(v); }

std::string render_csv(const std::vector<CsvTable>& tables) {
    std::ostringstream out;
    for (std::size_t t = 0; t < tables.size(); ++t) {
        if (t)
            out << '\n';
        const CsvTable& tab = tables[t];
        out << "# " << tab.note << '\n';
        for (std::size_t i = 0; i < tab.header.size(); ++i)
            out << (i ? "," : "") << tab.header[i];
        out << '\n';
        for (const auto& row : tab.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << row[i];
            out << '\n';
        }
    }
    return out.str();
}

void write_json(const Json& j, const IoOpts& io) {
    isoharm::emit::write_output(j.dump(2), io.output);
}

void write_csv(const std::vector<CsvTable>& tables, const IoOpts& io) {
    isoharm::emit::write_output(render_csv(tables), io.output);
}

// --------------------------------------------------------------- parsing

Rat parse_ratio_text(const std::string& text) {
    try {
        return isoharm::parse_rational(text);
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational literal: " + text);
    }
}

/// Multiplicity ratio b = m2/m1 from --b and/or explicit multiplicities; both
/// together must agree.
Rat resolve_ratio(const std::string& b_text, std::optional<int> m1, std::optional<int> m2) {
    std::optional<Rat> from_b;
    if (!b_text.empty())
        from_b = parse_ratio_text(b_text);
    std::optional<Rat> from_m;
    if (m1 || m2) {
        if (!(m1 && m2))
            throw std::invalid_argument("give both --m1 and --m2, or neither");
        if (*m1 < 1 || *m2 < 1)
            throw std::invalid_argument("multiplicities must be positive");
        from_m = Rat(*m2, *m1);
    }
    if (from_b && from_m && *from_b != *from_m)
        throw std::invalid_argument("--b must equal m2/m1 when multiplicities are given");
    if (from_b)
        return *from_b;
    if (from_m)
        return *from_m;
    throw std::invalid_argument("give --b or the pair --m1/--m2");
}

/// Smallest concrete multiplicities realizing the ratio, for code paths that
/// scan an actual family rather than the abstract quartic.
isoharm::IsoparametricFamily family_from_ratio(const Rat& b,
                                               std::optional<int> m1,
                                               std::optional<int> m2) {
    if (m1 && m2)
        return isoharm::IsoparametricFamily(4, *m1, *m2);
    Int num = boost::multiprecision::numerator(b);
    Int den = boost::multiprecision::denominator(b);
    if (num > 1000000 || den > 1000000)
        throw std::invalid_argument("ratio too large for a concrete family; give --m1/--m2");
    return isoharm::IsoparametricFamily(4, den.convert_to<int>(), num.convert_to<int>());
}

std::pair<int, int> parse_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("range must look like LO:HI, got: " + text);
    int lo = 0, hi = 0;
    try {
        std::size_t used = 0;
        lo = std::stoi(text.substr(0, colon), &used);
        if (used != colon)
            throw std::invalid_argument("");
        std::string tail = text.substr(colon + 1);
        hi = std::stoi(tail, &used);
        if (used != tail.size())
            throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed range: " + text);
    }
    if (lo > hi)
        throw std::invalid_argument("empty range: " + text);
    return {lo, hi};
}

std::vector<Rat> parse_ratio_list(const std::string& text) {
    std::vector<Rat> out;
    std::string item;
    std::istringstream stream(text);
    while (std::getline(stream, item, ','))
        out.push_back(parse_ratio_text(item));
    if (out.empty())
        throw std::invalid_argument("empty ratio list");
    return out;
}

// --------------------------------------------------------------- pieces

Json family_json(const isoharm::IsoparametricFamily& fam) {
    Json j;
    j["degree"] = fam.degree;
    j["m1"] = fam.m1;
    j["m2"] = fam.m2;
    j["dimension"] = fam.dim();
    return j;
}

Json solution_json(const isoharm::Solution& sol) {
    Json j;
    j["s"] = sol.s;
    j["alpha"] = sol.inv.alpha;
    j["a2"] = sol.inv.a2;
    j["residual"] = sol.residual;
    j["multiplicity"] = sol.multiplicity;
    return j;
}

const char* regime_name(isoharm::Regime regime) {
    return regime == isoharm::Regime::none ? "none" : "some";
}

std::string family_echo(const isoharm::IsoparametricFamily& fam) {
    return "degree=" + std::to_string(fam.degree) + " m1=" + std::to_string(fam.m1) +
           " m2=" + std::to_string(fam.m2);
}

// ------------------------------------------------------------- invariants

struct InvariantsCfg {
    int degree = 3;
    int m1 = 1;
    std::optional<int> m2;
    double s = 0.0;
    std::optional<int> r;
    double c = 1.0;
    IoOpts io;
};

void run_invariants(const InvariantsCfg& cfg) {
    isoharm::IsoparametricFamily fam(cfg.degree, cfg.m1, cfg.m2.value_or(cfg.m1));
    isoharm::CurvatureInvariants inv = isoharm::invariants(fam, cfg.s);
    double minimal_s = isoharm::minimal_parameter(fam);

    std::optional<double> residual;
    std::optional<bool> only_minimal;
    if (cfg.r) {
        isoharm::HarmonicityQuery query{cfg.c, fam.dim(), *cfg.r, inv.a2,
                                        inv.alpha * inv.alpha};
        residual = isoharm::residual(query);
        if (cfg.c <= 0.0)
            only_minimal = isoharm::nonexistence_flat_or_negative(query);
    }

    if (cfg.io.format == "json") {
        Json j = isoharm::emit::header("invariants");
        j["input"] = family_json(fam);
        j["input"]["s"] = cfg.s;
        j["note"] =
            "principal curvatures with multiplicities, mean curvature alpha, and "
            "squared shape operator norm |A|^2 of the family member at parameter s, "
            "plus the parameter of the minimal member";
        Json ks = Json::array();
        for (const auto& [value, multiplicity] : inv.principal) {
            Json k;
            k["value"] = value;
            k["multiplicity"] = multiplicity;
            ks.push_back(k);
        }
        j["principal_curvatures"] = ks;
        j["alpha"] = inv.alpha;
        j["a2"] = inv.a2;
        j["minimal_s"] = minimal_s;
        if (residual) {
            Json res;
            res["r"] = *cfg.r;
            res["c"] = cfg.c;
            res["value"] = *residual;
            if (only_minimal)
                res["only_minimal_solutions"] = *only_minimal;
            j["residual"] = res;
        }
        write_json(j, cfg.io);
        return;
    }

    CsvTable tab;
    tab.note = "isoharm invariants " + family_echo(fam) + " s=" + fd(cfg.s) +
               ": curvature data of the family member; minimal member at s=" +
               fd(minimal_s);
    tab.header = {"degree", "m1", "m2", "s", "dimension", "alpha", "a2", "minimal_s"};
    std::vector<std::string> row{std::to_string(fam.degree), std::to_string(fam.m1),
                                 std::to_string(fam.m2),     fd(cfg.s),
                                 std::to_string(fam.dim()),  fd(inv.alpha),
                                 fd(inv.a2),                 fd(minimal_s)};
    for (std::size_t i = 0; i < inv.principal.size(); ++i) {
        tab.header.push_back("k" + std::to_string(i + 1));
        tab.header.push_back("mult" + std::to_string(i + 1));
        row.push_back(fd(inv.principal[i].first));
        row.push_back(std::to_string(inv.principal[i].second));
    }
    if (residual) {
        tab.header.insert(tab.header.end(), {"r", "c", "residual"});
        row.push_back(std::to_string(*cfg.r));
        row.push_back(fd(cfg.c));
        row.push_back(fd(*residual));
    }
    tab.rows.push_back(std::move(row));
    write_csv({tab}, cfg.io);
}

// ------------------------------------------------------------------ roots

struct RootsCfg {
    std::optional<int> degree;
    std::optional<int> m1;
    std::optional<int> m2;
    std::string b;
    int r = 2;
    IoOpts io;
};

void run_roots(const RootsCfg& cfg) {
    bool ratio_given = !cfg.b.empty() || (cfg.m1 && cfg.m2 && *cfg.m1 != *cfg.m2);
    int degree = cfg.degree.value_or(ratio_given ? 4 : 0);
    if (degree == 0)
        throw std::invalid_argument(
            "give --degree, or a multiplicity ratio for the degree-4 quartic");

    if (ratio_given && degree != 4)
        throw std::invalid_argument(
            "unequal multiplicities only arise at degree 4; drop --b or use --degree 4");

    if (degree == 4 && ratio_given) {
        Rat ratio = resolve_ratio(cfg.b, cfg.m1, cfg.m2);
        if (ratio == 1)
            throw std::invalid_argument(
                "ratio 1 is the equal-multiplicity case; drop --b");
        isoharm::IsoparametricFamily fam = family_from_ratio(ratio, cfg.m1, cfg.m2);
        isoharm::HarmonicQuartic quartic = isoharm::quartic::build(ratio, cfg.r);
        auto roots = isoharm::quartic::roots_in_unit_interval(quartic);
        isoharm::ClassificationResult cls = isoharm::classify(fam, cfg.r);

        if (cfg.io.format == "json") {
            Json j = isoharm::emit::header("roots");
            j["input"] = family_json(fam);
            j["input"]["r"] = cfg.r;
            j["input"]["b"] = isoharm::emit::rational(ratio);
            j["note"] =
                "roots in (0,1) of the quartic in y = cos^2(2s) whose zeros are the "
                "proper r-harmonic members of the degree-4 family with multiplicity "
                "ratio b = m2/m1, with the parameters s and re-verified residuals";
            Json coeffs = Json::array();
            for (const auto& c : quartic.p.coefficients())
                coeffs.push_back(isoharm::to_string(c));
            j["quartic_coefficients_ascending"] = coeffs;
            Json yroots = Json::array();
            for (const auto& root : roots) {
                Json jr;
                jr["y"] = root.approx;
                jr["exact"] = root.exact ? Json(isoharm::to_string(root.exact_value))
                                         : Json(nullptr);
                jr["multiplicity"] = root.multiplicity;
                yroots.push_back(jr);
            }
            j["roots"] = yroots;
            Json sols = Json::array();
            for (const auto& sol : cls.solutions)
                sols.push_back(solution_json(sol));
            j["solutions"] = sols;
            j["count"] = cls.count;
            write_json(j, cfg.io);
            return;
        }

        CsvTable tab;
        tab.note = "isoharm roots " + family_echo(fam) + " r=" + std::to_string(cfg.r) +
                   ": quartic roots y = cos^2(2s) and the solutions s; count=" +
                   std::to_string(cls.count);
        tab.header = {"y", "exact", "multiplicity", "s", "residual"};
        for (std::size_t i = 0; i < roots.size(); ++i) {
            const auto& sol = cls.solutions.at(i);
            tab.rows.push_back({fd(roots[i].approx), roots[i].exact ? "1" : "0",
                                std::to_string(roots[i].multiplicity), fd(sol.s),
                                fd(sol.residual)});
        }
        write_csv({tab}, cfg.io);
        return;
    }

    // Equal-multiplicity reduction to a quadratic in x = cos(2*ell*s). The
    // residual scale depends on m1, so an unspecified family defaults to the
    // smallest one.
    isoharm::IsoparametricFamily fam(degree, cfg.m1.value_or(1),
                                     cfg.m2.value_or(cfg.m1.value_or(1)));
    isoharm::DegreeQuadratic quad = isoharm::degree_quadratic(degree, cfg.r);
    auto admissible = isoharm::degree_roots(degree, cfg.r);

    // Raw roots, including inadmissible ones, for the exclusion notes.
    std::vector<isoharm::QuadraticRoot> raw;
    {
        double a = isoharm::to_double(Rat(quad.a));
        double b = isoharm::to_double(Rat(quad.b));
        double c = isoharm::to_double(Rat(quad.c));
        double disc = b * b - 4.0 * a * c;
        if (disc == 0.0) {
            raw.push_back({-b / (2.0 * a), false, Rat(), 2});
        } else if (disc > 0.0) {
            double sq = std::sqrt(disc);
            raw.push_back({(-b - sq) / (2.0 * a), false, Rat(), 1});
            raw.push_back({(-b + sq) / (2.0 * a), false, Rat(), 1});
        }
    }
    isoharm::ParameterMap pm = isoharm::roots_to_parameters(degree, raw);
    isoharm::ClassificationResult cls = isoharm::classify(fam, cfg.r);

    if (cfg.io.format == "json") {
        Json j = isoharm::emit::header("roots");
        j["input"] = family_json(fam);
        j["input"]["r"] = cfg.r;
        j["note"] =
            "roots of the quadratic reduction in x = cos(2*degree*s) admissible in "
            "(-1,1), each giving two parameters s, with re-verified residuals";
        Json q;
        q["a"] = quad.a.str();
        q["b"] = quad.b.str();
        q["c"] = quad.c.str();
        j["quadratic"] = q;
        Json xroots = Json::array();
        for (const auto& root : admissible) {
            Json jr;
            jr["x"] = root.x;
            jr["exact"] = root.exact ? Json(isoharm::to_string(root.exact_value))
                                     : Json(nullptr);
            jr["multiplicity"] = root.multiplicity;
            xroots.push_back(jr);
        }
        j["roots"] = xroots;
        j["excluded"] = pm.notes;
        Json sols = Json::array();
        for (const auto& sol : cls.solutions)
            sols.push_back(solution_json(sol));
        j["solutions"] = sols;
        j["count"] = cls.count;
        write_json(j, cfg.io);
        return;
    }

    CsvTable tab;
    tab.note = "isoharm roots " + family_echo(fam) + " r=" + std::to_string(cfg.r) +
               ": quadratic roots x = cos(2*degree*s) and the solutions s; count=" +
               std::to_string(cls.count) + " excluded=" + std::to_string(pm.notes.size());
    tab.header = {"x", "exact", "multiplicity", "s1", "residual1", "s2", "residual2"};
    for (const auto& root : admissible) {
        double theta = std::acos(root.x);
        double s1 = theta / (2.0 * degree);
        double s2 = (2.0 * isoharm::pi - theta) / (2.0 * degree);
        auto find = [&](double s) -> const isoharm::Solution& {
            for (const auto& sol : cls.solutions)
                if (std::abs(sol.s - s) < 1e-12)
                    return sol;
            throw isoharm::verification_error("solution list does not cover root");
        };
        tab.rows.push_back({fd(root.x), root.exact ? "1" : "0",
                            std::to_string(root.multiplicity), fd(s1),
                            fd(find(s1).residual), fd(s2), fd(find(s2).residual)});
    }
    write_csv({tab}, cfg.io);
}

// --------------------------------------------------------------- classify

struct ClassifyCfg {
    int degree = 3;
    int m1 = 1;
    std::optional<int> m2;
    int r = 2;
    IoOpts io;
};

void run_classify(const ClassifyCfg& cfg) {
    isoharm::IsoparametricFamily fam(cfg.degree, cfg.m1, cfg.m2.value_or(cfg.m1));
    isoharm::ClassificationResult cls = isoharm::classify(fam, cfg.r);

    if (cfg.io.format == "json") {
        Json j = isoharm::emit::header("classify");
        j["input"] = family_json(fam);
        j["input"]["r"] = cfg.r;
        j["note"] =
            "proper r-harmonic members of the family: parameters s in (0, pi/degree) "
            "where the residual |A|^4 - m|A|^2 - (r-2) m^2 alpha^2 vanishes, counted "
            "with root multiplicity";
        j["count"] = cls.count;
        j["regime"] = regime_name(cls.regime);
        Json sols = Json::array();
        for (const auto& sol : cls.solutions)
            sols.push_back(solution_json(sol));
        j["solutions"] = sols;
        write_json(j, cfg.io);
        return;
    }

    CsvTable tab;
    tab.note = "isoharm classify " + family_echo(fam) + " r=" + std::to_string(cfg.r) +
               ": proper r-harmonic parameters s; count=" + std::to_string(cls.count) +
               " regime=" + regime_name(cls.regime);
    tab.header = {"s", "alpha", "a2", "residual", "multiplicity"};
    for (const auto& sol : cls.solutions)
        tab.rows.push_back({fd(sol.s), fd(sol.inv.alpha), fd(sol.inv.a2),
                            fd(sol.residual), std::to_string(sol.multiplicity)});
    write_csv({tab}, cfg.io);
}

// ------------------------------------------------------------- thresholds

struct ThresholdsCfg {
    std::string b;
    std::optional<int> m1;
    std::optional<int> m2;
    bool confirm = false;
    int r_max = 0;
    std::size_t grid = 200000;
    IoOpts io;
};

void run_thresholds(const ThresholdsCfg& cfg) {
    Rat ratio = resolve_ratio(cfg.b, cfg.m1, cfg.m2);
    isoharm::ThresholdReport report = isoharm::thresholds::minimize(ratio);

    std::optional<isoharm::thresholds::BruteForceThresholds> confirm;
    int r_max = 0;
    if (cfg.confirm) {
        isoharm::IsoparametricFamily fam = family_from_ratio(ratio, cfg.m1, cfg.m2);
        // Default horizon: enough to see both thresholds when the closed-form
        // bound is moderate, capped so enormous ratios stay tractable.
        r_max = cfg.r_max > 0
                    ? cfg.r_max
                    : static_cast<int>(std::min<std::int64_t>(
                          report.bound_rstarstar,
                          std::max<std::int64_t>(report.bound_rstar, 500)));
        confirm = isoharm::thresholds::brute_force_thresholds(fam, r_max, cfg.grid);
        bool agrees = confirm->rstar == report.rstar &&
                      (!confirm->rstarstar || *confirm->rstarstar == report.rstarstar);
        if (!agrees)
            throw isoharm::verification_error(
                "grid scan disagrees with the certified minimization");
    }

    if (cfg.io.format == "json") {
        Json j = isoharm::emit::header("thresholds");
        j["input"]["b"] = isoharm::emit::rational(ratio);
        if (cfg.m1) {
            j["input"]["m1"] = *cfg.m1;
            j["input"]["m2"] = *cfg.m2;
        }
        j["note"] =
            "smallest orders rstar (first proper r-harmonic member) and rstarstar "
            "(first four, with multiplicity) for the degree-4 family with "
            "multiplicity ratio b, from certified minimization of the ratio "
            "Q_b(y)/R_b(y) on both sides of its pole at y0";
        j["y0"] = isoharm::emit::rational(report.y0);
        j["y1"] = report.y1;
        j["y2"] = report.y2;
        j["R1"] = report.R1;
        j["R2"] = report.R2;
        j["rstar"] = report.rstar;
        j["rstarstar"] = report.rstarstar;
        j["near_integer"] = report.near_integer;
        Json bounds;
        bounds["rstar"] = isoharm::emit::rational(report.bound_rstar_value);
        bounds["rstar"]["integer"] = report.bound_rstar;
        bounds["rstarstar"] = isoharm::emit::rational(report.bound_rstarstar_value);
        bounds["rstarstar"]["integer"] = report.bound_rstarstar;
        j["bounds"] = bounds;
        if (confirm) {
            Json c;
            c["r_max"] = r_max;
            c["grid"] = cfg.grid;
            c["rstar"] = confirm->rstar;
            c["rstarstar"] =
                confirm->rstarstar ? Json(*confirm->rstarstar) : Json(nullptr);
            c["agrees"] = true;
            j["confirmation"] = c;
        }
        write_json(j, cfg.io);
        return;
    }

    CsvTable tab;
    tab.note = "isoharm thresholds b=" + isoharm::to_string(ratio) +
               ": first orders with one and with four proper r-harmonic members, "
               "with the ratio minima and closed-form bounds";
    tab.header = {"b",     "y0",    "y1",        "y2",
                  "R1",    "R2",    "rstar",     "rstarstar",
                  "bound_rstar", "bound_rstarstar", "near_integer"};
    std::vector<std::string> row{fd(isoharm::to_double(ratio)),
                                 fd(isoharm::to_double(report.y0)),
                                 fd(report.y1),
                                 fd(report.y2),
                                 fd(report.R1),
                                 fd(report.R2),
                                 std::to_string(report.rstar),
                                 std::to_string(report.rstarstar),
                                 std::to_string(report.bound_rstar),
                                 std::to_string(report.bound_rstarstar),
                                 report.near_integer ? "1" : "0"};
    if (confirm) {
        tab.header.insert(tab.header.end(), {"scan_rstar", "scan_rstarstar"});
        row.push_back(std::to_string(confirm->rstar));
        row.push_back(confirm->rstarstar ? std::to_string(*confirm->rstarstar) : "");
    }
    tab.rows.push_back(std::move(row));
    write_csv({tab}, cfg.io);
}

// ----------------------------------------------------------------- bounds

struct BoundsCfg {
    std::string b;
    std::optional<int> m1;
    std::optional<int> m2;
    IoOpts io;
};

void run_bounds(const BoundsCfg& cfg) {
    Rat ratio = resolve_ratio(cfg.b, cfg.m1, cfg.m2);
    isoharm::thresholds::UpperBounds bounds = isoharm::thresholds::upper_bounds(ratio);

    if (cfg.io.format == "json") {
        Json j = isoharm::emit::header("bounds");
        j["input"]["b"] = isoharm::emit::rational(ratio);
        j["note"] =
            "closed-form upper bounds for the threshold orders, from evaluating the "
            "ratio Q_b/R_b at the midpoints y0/2 and (1+y0)/2 of the two "
            "subintervals";
        j["rstar"] = isoharm::emit::rational(bounds.rstar_value);
        j["rstar"]["integer"] = bounds.rstar;
        j["rstarstar"] = isoharm::emit::rational(bounds.rstarstar_value);
        j["rstarstar"]["integer"] = bounds.rstarstar;
        write_json(j, cfg.io);
        return;
    }

    CsvTable tab;
    tab.note = "isoharm bounds b=" + isoharm::to_string(ratio) +
               ": closed-form upper bounds for the threshold orders";
    tab.header = {"b", "rstar_value", "rstar", "rstarstar_value", "rstarstar"};
    tab.rows.push_back({fd(isoharm::to_double(ratio)),
                        fd(isoharm::to_double(bounds.rstar_value)),
                        std::to_string(bounds.rstar),
                        fd(isoharm::to_double(bounds.rstarstar_value)),
                        std::to_string(bounds.rstarstar)});
    write_csv({tab}, cfg.io);
}

// ------------------------------------------------------------------- scan

struct ScanCfg {
    int degree = 3;
    int m1 = 1;
    std::optional<int> m2;
    int r = 2;
    std::size_t grid = 100000;
    double eps = 1e-4;
    IoOpts io;
};

void run_scan(const ScanCfg& cfg) {
    isoharm::IsoparametricFamily fam(cfg.degree, cfg.m1, cfg.m2.value_or(cfg.m1));
    isoharm::ScanResult scan = isoharm::scan_residual(fam, cfg.r, cfg.grid, cfg.eps);

    const isoharm::ScanSample* lowest = &scan.samples.front();
    for (const auto& sample : scan.samples)
        if (sample.value < lowest->value)
            lowest = &sample;

    if (cfg.io.format == "json") {
        Json j = isoharm::emit::header("scan");
        j["input"] = family_json(fam);
        j["input"]["r"] = cfg.r;
        j["input"]["grid"] = cfg.grid;
        j["input"]["eps"] = cfg.eps;
        j["note"] =
            "uniform grid scan of the order-r harmonicity residual over the family "
            "parameter, with sign-change brackets and near-zero tangency brackets; "
            "the full sample table is available through --format csv";
        j["s_lo"] = scan.samples.front().s;
        j["s_hi"] = scan.samples.back().s;
        j["sample_count"] = scan.samples.size();
        Json min_sample;
        min_sample["s"] = lowest->s;
        min_sample["value"] = lowest->value;
        j["min_sample"] = min_sample;
        Json brackets = Json::array();
        for (const auto& bracket : scan.brackets) {
            Json b;
            b["lo"] = bracket.lo;
            b["hi"] = bracket.hi;
            b["tangency"] = bracket.tangency;
            brackets.push_back(b);
        }
        j["brackets"] = brackets;
        j["bracket_count"] = scan.brackets.size();
        write_json(j, cfg.io);
        return;
    }

    CsvTable samples;
    samples.note = "isoharm scan " + family_echo(fam) + " r=" + std::to_string(cfg.r) +
                   " grid=" + std::to_string(cfg.grid) + " eps=" + fd(cfg.eps) +
                   ": order-r harmonicity residual over the family parameter";
    samples.header = {"s", "value"};
    for (const auto& sample : scan.samples)
        samples.rows.push_back({fd(sample.s), fd(sample.value)});

    CsvTable brackets;
    brackets.note = "root brackets: sign changes and near-zero tangencies";
    brackets.header = {"lo", "hi", "tangency"};
    for (const auto& bracket : scan.brackets)
        brackets.rows.push_back({fd(bracket.lo), fd(bracket.hi),
                                 bracket.tangency ? "1" : "0"});
    write_csv({samples, brackets}, cfg.io);
}

// ------------------------------------------------------------ verify-geom

struct VerifyGeomCfg {
    std::string kind;
    int m = 2;
    std::optional<int> m1;
    std::optional<int> m2;
    std::optional<double> radius;
    std::optional<double> radius1;
    std::optional<double> radius2;
    std::optional<int> r;
    double h = 1e-3;
    int p = 1;
    IoOpts io;
};

void run_verify_geom(const VerifyGeomCfg& cfg) {
    namespace geo = isoharm::geomlab;
    geo::Chart chart;
    if (cfg.kind == "sphere") {
        long double radius;
        if (cfg.radius)
            radius = static_cast<long double>(*cfg.radius);
        else if (cfg.r)
            radius = 1.0L / std::sqrt(static_cast<long double>(*cfg.r));
        else
            throw std::invalid_argument("give --radius, or --r for the radius 1/sqrt(r)");
        chart = geo::Chart::small_sphere(cfg.m, radius);
    } else {
        if (!(cfg.m1 && cfg.m2))
            throw std::invalid_argument("a torus chart needs --m1 and --m2");
        long double total = static_cast<long double>(*cfg.m1 + *cfg.m2);
        long double r1 = cfg.radius1
                             ? static_cast<long double>(*cfg.radius1)
                             : std::sqrt(static_cast<long double>(*cfg.m1) / total);
        long double r2 = cfg.radius2
                             ? static_cast<long double>(*cfg.radius2)
                             : std::sqrt(1.0L - r1 * r1);
        chart = geo::Chart::clifford_torus(*cfg.m1, *cfg.m2, r1, r2);
    }

    long double h = static_cast<long double>(cfg.h);
    geo::GeomReport report = geo::sample_report(chart, h);
    double lap_residual =
        static_cast<double>(geo::verify_mean_curvature_laplacian(chart, chart.center(), h)
                                .norm());
    std::optional<double> power_residual;
    if (cfg.p == 2)
        power_residual = static_cast<double>(
            geo::verify_power_law(chart, 2, chart.center(), h).norm());
    else if (cfg.p != 1)
        throw isoharm::unsupported_error("only powers 1 and 2 are implemented");
    std::optional<bool> criterion;
    if (cfg.r)
        criterion = geo::check_criterion_on_chart(chart, *cfg.r, h);

    if (cfg.io.format == "json") {
        Json j = isoharm::emit::header("verify-geom");
        Json input;
        input["kind"] = cfg.kind;
        input["dimension"] = chart.dim();
        input["ambient_dimension"] = chart.ambient_dim();
        input["radius1"] = static_cast<double>(chart.radius1);
        input["radius2"] = static_cast<double>(chart.radius2);
        input["h"] = cfg.h;
        input["p"] = cfg.p;
        if (cfg.r)
            input["r"] = *cfg.r;
        j["input"] = input;
        j["note"] =
            "finite-difference check on an embedded chart: fundamental forms and "
            "their constancy, the rough Laplacian power law for the mean curvature "
            "field, and optionally the order-r harmonicity criterion";
        j["f"] = static_cast<double>(report.f);
        j["a2"] = static_cast<double>(report.a2);
        j["f_spread"] = static_cast<double>(report.f_spread);
        j["a2_spread"] = static_cast<double>(report.a2_spread);
        j["max_unit_deviation"] = static_cast<double>(report.max_unit_deviation);
        j["laplacian_residual"] = lap_residual;
        if (power_residual)
            j["iterated_laplacian_residual"] = *power_residual;
        if (criterion) {
            Json c;
            c["r"] = *cfg.r;
            c["satisfied"] = *criterion;
            j["criterion"] = c;
        }
        write_json(j, cfg.io);
        return;
    }

    CsvTable tab;
    tab.note = "isoharm verify-geom kind=" + cfg.kind +
               " dim=" + std::to_string(chart.dim()) + " h=" + fd(cfg.h) +
               " p=" + std::to_string(cfg.p) +
               ": chart invariants and finite-difference residuals";
    tab.header = {"dimension",  "radius1",          "radius2",
                  "h",          "f",                "a2",
                  "f_spread",   "a2_spread",        "max_unit_deviation",
                  "laplacian_residual"};
    std::vector<std::string> row{std::to_string(chart.dim()),
                                 fd(static_cast<double>(chart.radius1)),
                                 fd(static_cast<double>(chart.radius2)),
                                 fd(cfg.h),
                                 fd(static_cast<double>(report.f)),
                                 fd(static_cast<double>(report.a2)),
                                 fd(static_cast<double>(report.f_spread)),
                                 fd(static_cast<double>(report.a2_spread)),
                                 fd(static_cast<double>(report.max_unit_deviation)),
                                 fd(lap_residual)};
    if (power_residual) {
        tab.header.push_back("iterated_laplacian_residual");
        row.push_back(fd(*power_residual));
    }
    if (criterion) {
        tab.header.insert(tab.header.end(), {"r", "criterion"});
        row.push_back(std::to_string(*cfg.r));
        row.push_back(*criterion ? "1" : "0");
    }
    tab.rows.push_back(std::move(row));
    write_csv({tab}, cfg.io);
}

// ------------------------------------------------------------------ table

struct TableCfg {
    IoOpts io;
};

struct EqualRow {
    int degree = 0;
    int first_r = 0;
    std::vector<isoharm::QuadraticRoot> roots;
    int solutions = 0;
};

EqualRow equal_threshold(int degree) {
    for (int r = 2; r <= 1000; ++r) {
        auto roots = isoharm::degree_roots(degree, r);
        if (!roots.empty()) {
            EqualRow row;
            row.degree = degree;
            row.first_r = r;
            row.roots = std::move(roots);
            for (const auto& root : row.roots)
                row.solutions += 2 * root.multiplicity;
            return row;
        }
    }
    throw isoharm::verification_error("no admissible roots up to order 1000 for degree " +
                                      std::to_string(degree));
}

void run_table(const TableCfg& cfg) {
    std::vector<EqualRow> equal;
    for (int degree : {3, 4, 6})
        equal.push_back(equal_threshold(degree));

    const std::vector<Rat> ratios{Rat(1), Rat(8, 7), Rat(10000)};
    std::vector<isoharm::ThresholdReport> reports;
    for (const auto& b : ratios)
        reports.push_back(isoharm::thresholds::minimize(b));

    if (cfg.io.format == "json") {
        Json j = isoharm::emit::header("table");
        j["note"] =
            "classification summary: first orders with proper r-harmonic members for "
            "the equal-multiplicity families, certified threshold minima for selected "
            "multiplicity ratios, and the closed-form upper bounds";
        Json eq = Json::array();
        for (const auto& row : equal) {
            Json e;
            e["degree"] = row.degree;
            e["first_order"] = row.first_r;
            Json roots = Json::array();
            for (const auto& root : row.roots) {
                Json jr;
                jr["x"] = root.x;
                jr["exact"] = root.exact ? Json(isoharm::to_string(root.exact_value))
                                         : Json(nullptr);
                jr["multiplicity"] = root.multiplicity;
                roots.push_back(jr);
            }
            e["roots"] = roots;
            e["solutions"] = row.solutions;
            eq.push_back(e);
        }
        j["equal_multiplicity"] = eq;
        Json th = Json::array();
        for (const auto& report : reports) {
            Json t;
            t["b"] = isoharm::emit::rational(report.b);
            t["y1"] = report.y1;
            t["y2"] = report.y2;
            t["R1"] = report.R1;
            t["R2"] = report.R2;
            t["rstar"] = report.rstar;
            t["rstarstar"] = report.rstarstar;
            th.push_back(t);
        }
        j["ratio_thresholds"] = th;
        Json bounds = Json::array();
        for (const auto& report : reports) {
            Json b;
            b["b"] = isoharm::emit::rational(report.b);
            b["rstar"] = isoharm::emit::rational(report.bound_rstar_value);
            b["rstar"]["integer"] = report.bound_rstar;
            b["rstarstar"] = isoharm::emit::rational(report.bound_rstarstar_value);
            b["rstarstar"]["integer"] = report.bound_rstarstar;
            bounds.push_back(b);
        }
        j["upper_bounds"] = bounds;
        write_json(j, cfg.io);
        return;
    }

    CsvTable eq;
    eq.note = "equal-multiplicity families: first order with proper r-harmonic "
              "members and the reduction roots there";
    eq.header = {"degree", "first_order", "x1", "x2", "solutions"};
    for (const auto& row : equal) {
        std::string x1 = fd(row.roots.front().x);
        std::string x2 = fd(row.roots.back().x);
        eq.rows.push_back({std::to_string(row.degree), std::to_string(row.first_r), x1,
                           x2, std::to_string(row.solutions)});
    }

    CsvTable th;
    th.note = "multiplicity-ratio thresholds from certified minimization of "
              "Q_b/R_b";
    th.header = {"b", "y1", "y2", "R1", "R2", "rstar", "rstarstar"};
    for (const auto& report : reports)
        th.rows.push_back({fd(isoharm::to_double(report.b)), fd(report.y1),
                           fd(report.y2), fd(report.R1), fd(report.R2),
                           std::to_string(report.rstar),
                           std::to_string(report.rstarstar)});

    CsvTable bounds;
    bounds.note = "closed-form upper bounds for the threshold orders";
    bounds.header = {"b", "bound_rstar", "bound_rstarstar"};
    for (const auto& report : reports)
        bounds.rows.push_back({fd(isoharm::to_double(report.b)),
                               std::to_string(report.bound_rstar),
                               std::to_string(report.bound_rstarstar)});

    write_csv({eq, th, bounds}, cfg.io);
}

// ------------------------------------------------------------------ sweep

struct SweepCfg {
    std::string b_list;
    std::string r_range;
    std::optional<int> degree;
    int m1 = 1;
    std::optional<int> m2;
    IoOpts io;
};

void run_sweep(const SweepCfg& cfg) {
    if (cfg.b_list.empty() == cfg.r_range.empty())
        throw std::invalid_argument("give exactly one of --b-list or --r-range");

    if (!cfg.b_list.empty()) {
        std::vector<Rat> ratios = parse_ratio_list(cfg.b_list);
        std::vector<isoharm::ThresholdReport> reports;
        for (const auto& b : ratios)
            reports.push_back(isoharm::thresholds::minimize(b));

        if (cfg.io.format == "json") {
            Json j = isoharm::emit::header("sweep");
            j["input"]["b_list"] = cfg.b_list;
            j["note"] =
                "threshold orders and ratio minima across a list of multiplicity "
                "ratios, in input order";
            Json rows = Json::array();
            for (const auto& report : reports) {
                Json row;
                row["b"] = isoharm::emit::rational(report.b);
                row["y1"] = report.y1;
                row["y2"] = report.y2;
                row["R1"] = report.R1;
                row["R2"] = report.R2;
                row["rstar"] = report.rstar;
                row["rstarstar"] = report.rstarstar;
                row["bound_rstar"] = report.bound_rstar;
                row["bound_rstarstar"] = report.bound_rstarstar;
                rows.push_back(row);
            }
            j["rows"] = rows;
            write_json(j, cfg.io);
            return;
        }

        CsvTable tab;
        tab.note = "isoharm sweep over multiplicity ratios: threshold orders and "
                   "ratio minima, in input order";
        tab.header = {"b",     "y1",    "y2",        "R1",
                      "R2",    "rstar", "rstarstar", "bound_rstar",
                      "bound_rstarstar"};
        for (const auto& report : reports)
            tab.rows.push_back({fd(isoharm::to_double(report.b)), fd(report.y1),
                                fd(report.y2), fd(report.R1), fd(report.R2),
                                std::to_string(report.rstar),
                                std::to_string(report.rstarstar),
                                std::to_string(report.bound_rstar),
                                std::to_string(report.bound_rstarstar)});
        write_csv({tab}, cfg.io);
        return;
    }

    if (!cfg.degree)
        throw std::invalid_argument("--r-range needs --degree (and multiplicities)");
    auto [lo, hi] = parse_range(cfg.r_range);
    isoharm::IsoparametricFamily fam(*cfg.degree, cfg.m1, cfg.m2.value_or(cfg.m1));
    std::vector<isoharm::ClassificationResult> results;
    for (int r = lo; r <= hi; ++r)
        results.push_back(isoharm::classify(fam, r));

    if (cfg.io.format == "json") {
        Json j = isoharm::emit::header("sweep");
        j["input"] = family_json(fam);
        j["input"]["r_range"] = cfg.r_range;
        j["note"] = "solution counts of the family across an order range, ascending";
        Json rows = Json::array();
        for (int r = lo; r <= hi; ++r) {
            const auto& cls = results[static_cast<std::size_t>(r - lo)];
            Json row;
            row["r"] = r;
            row["count"] = cls.count;
            row["regime"] = regime_name(cls.regime);
            Json svals = Json::array();
            for (const auto& sol : cls.solutions)
                svals.push_back(sol.s);
            row["s"] = svals;
            rows.push_back(row);
        }
        j["rows"] = rows;
        write_json(j, cfg.io);
        return;
    }

    CsvTable tab;
    tab.note = "isoharm sweep " + family_echo(fam) + " r=" + cfg.r_range +
               ": proper r-harmonic solution counts per order";
    tab.header = {"r", "count"};
    for (int r = lo; r <= hi; ++r)
        tab.rows.push_back({std::to_string(r),
                            std::to_string(results[static_cast<std::size_t>(r - lo)].count)});
    write_csv({tab}, cfg.io);
}

// ------------------------------------------------------------------- main

int diagnostic(const CLI::App& app, const char* type, const std::string& message,
               int status) {
    Json j;
    j["tool"] = isoharm::tool_name;
    j["version"] = isoharm::tool_version;
    auto subs = app.get_subcommands();
    if (!subs.empty())
        j["command"] = subs.front()->get_name();
    Json err;
    err["status"] = status;
    err["type"] = type;
    err["message"] = message;
    j["error"] = err;
    std::cerr << j.dump(2) << '\n';
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"proper r-harmonic isoparametric hypersurfaces of the unit sphere: "
                 "classification, thresholds, bounds, scans, and finite-difference "
                 "verification"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_version_flag("--version", std::string(isoharm::tool_version));
    app.require_subcommand(1);
    app.footer("Environment: ISOHARM_THREADS overrides the worker count for grid scans.");

    InvariantsCfg inv_cfg;
    auto* inv = app.add_subcommand(
        "invariants", "Curvature invariants of a family member at parameter s");
    inv->add_option("--degree", inv_cfg.degree, "Number of distinct principal curvatures")
        ->required();
    inv->add_option("--m1", inv_cfg.m1, "First multiplicity")->required();
    inv->add_option("--m2", inv_cfg.m2, "Second multiplicity (defaults to m1)");
    inv->add_option("--s", inv_cfg.s, "Family parameter in (0, pi/degree)")->required();
    inv->add_option("--r", inv_cfg.r, "Also evaluate the order-r harmonicity residual");
    inv->add_option("--c", inv_cfg.c, "Ambient curvature for the residual")
        ->capture_default_str();
    add_io(inv, inv_cfg.io);
    inv->callback([&] { run_invariants(inv_cfg); });

    RootsCfg roots_cfg;
    auto* roots = app.add_subcommand(
        "roots", "Roots of the algebraic reduction and the parameters they map to");
    roots->add_option("--degree", roots_cfg.degree, "Number of distinct principal curvatures");
    roots->add_option("--m1", roots_cfg.m1, "First multiplicity");
    roots->add_option("--m2", roots_cfg.m2, "Second multiplicity");
    roots->add_option("--b", roots_cfg.b, "Multiplicity ratio m2/m1 as p/q");
    roots->add_option("--r", roots_cfg.r, "Harmonicity order")->required();
    add_io(roots, roots_cfg.io);
    roots->callback([&] { run_roots(roots_cfg); });

    ClassifyCfg classify_cfg;
    auto* classify = app.add_subcommand(
        "classify", "Proper r-harmonic members of an isoparametric family");
    classify->add_option("--degree", classify_cfg.degree, "Number of distinct principal curvatures")
        ->required();
    classify->add_option("--m1", classify_cfg.m1, "First multiplicity")->required();
    classify->add_option("--m2", classify_cfg.m2, "Second multiplicity (defaults to m1)");
    classify->add_option("--r", classify_cfg.r, "Harmonicity order")->required();
    add_io(classify, classify_cfg.io);
    classify->callback([&] { run_classify(classify_cfg); });

    ThresholdsCfg thresholds_cfg;
    auto* thresholds = app.add_subcommand(
        "thresholds", "Certified threshold orders for a degree-4 family");
    thresholds->add_option("--b", thresholds_cfg.b, "Multiplicity ratio m2/m1 as p/q");
    thresholds->add_option("--m1", thresholds_cfg.m1, "First multiplicity");
    thresholds->add_option("--m2", thresholds_cfg.m2, "Second multiplicity");
    thresholds->add_flag("--confirm", thresholds_cfg.confirm,
                         "Also confirm by per-order grid scan");
    thresholds->add_option("--r-max", thresholds_cfg.r_max,
                           "Scan horizon for --confirm (default: bounded automatically)");
    thresholds->add_option("--grid", thresholds_cfg.grid, "Scan grid size for --confirm")
        ->capture_default_str();
    add_io(thresholds, thresholds_cfg.io);
    thresholds->callback([&] { run_thresholds(thresholds_cfg); });

    BoundsCfg bounds_cfg;
    auto* bounds = app.add_subcommand(
        "bounds", "Closed-form upper bounds for the threshold orders");
    bounds->add_option("--b", bounds_cfg.b, "Multiplicity ratio m2/m1 as p/q");
    bounds->add_option("--m1", bounds_cfg.m1, "First multiplicity");
    bounds->add_option("--m2", bounds_cfg.m2, "Second multiplicity");
    add_io(bounds, bounds_cfg.io);
    bounds->callback([&] { run_bounds(bounds_cfg); });

    ScanCfg scan_cfg;
    auto* scan = app.add_subcommand(
        "scan", "Grid scan of the harmonicity residual over the family parameter");
    scan->add_option("--degree", scan_cfg.degree, "Number of distinct principal curvatures")
        ->required();
    scan->add_option("--m1", scan_cfg.m1, "First multiplicity")->required();
    scan->add_option("--m2", scan_cfg.m2, "Second multiplicity (defaults to m1)");
    scan->add_option("--r", scan_cfg.r, "Harmonicity order")->required();
    scan->add_option("--grid", scan_cfg.grid, "Number of grid points")
        ->capture_default_str();
    scan->add_option("--eps", scan_cfg.eps, "Distance kept from the interval endpoints")
        ->capture_default_str();
    add_io(scan, scan_cfg.io);
    scan->callback([&] { run_scan(scan_cfg); });

    VerifyGeomCfg geom_cfg;
    auto* geom = app.add_subcommand(
        "verify-geom", "Finite-difference verification on an embedded chart");
    geom->add_option("--kind", geom_cfg.kind, "Chart kind: sphere or torus")
        ->required()
        ->check(CLI::IsMember({"sphere", "torus"}));
    geom->add_option("--m", geom_cfg.m, "Sphere dimension")->capture_default_str();
    geom->add_option("--m1", geom_cfg.m1, "Torus: dimension of the first factor");
    geom->add_option("--m2", geom_cfg.m2, "Torus: dimension of the second factor");
    geom->add_option("--radius", geom_cfg.radius,
                     "Sphere radius (default 1/sqrt(r) when --r is given)");
    geom->add_option("--radius1", geom_cfg.radius1,
                     "Torus: first radius (default sqrt(m1/(m1+m2)))");
    geom->add_option("--radius2", geom_cfg.radius2,
                     "Torus: second radius (default sqrt(1 - radius1^2))");
    geom->add_option("--r", geom_cfg.r, "Check the order-r harmonicity criterion");
    geom->add_option("--h", geom_cfg.h, "Finite-difference step")->capture_default_str();
    geom->add_option("--p", geom_cfg.p, "Laplacian power to verify (1 or 2)")
        ->capture_default_str();
    add_io(geom, geom_cfg.io);
    geom->callback([&] { run_verify_geom(geom_cfg); });

    TableCfg table_cfg;
    auto* table = app.add_subcommand(
        "table", "Summary table: thresholds of all families and the closed-form bounds");
    add_io(table, table_cfg.io);
    table->callback([&] { run_table(table_cfg); });

    SweepCfg sweep_cfg;
    auto* sweep = app.add_subcommand(
        "sweep", "Sweep an order range or a list of multiplicity ratios");
    sweep->add_option("--b-list", sweep_cfg.b_list,
                      "Comma-separated multiplicity ratios, e.g. 1,8/7,2");
    sweep->add_option("--r-range", sweep_cfg.r_range, "Order range LO:HI");
    sweep->add_option("--degree", sweep_cfg.degree,
                      "Family degree for --r-range sweeps");
    sweep->add_option("--m1", sweep_cfg.m1, "First multiplicity")->capture_default_str();
    sweep->add_option("--m2", sweep_cfg.m2, "Second multiplicity (defaults to m1)");
    add_io(sweep, sweep_cfg.io);
    sweep->callback([&] { run_sweep(sweep_cfg); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const isoharm::unsupported_error& e) {
        return diagnostic(app, "unsupported", e.what(), 4);
    } catch (const isoharm::verification_error& e) {
        return diagnostic(app, "verification", e.what(), 3);
    } catch (const isoharm::discretization_error& e) {
        return diagnostic(app, "discretization", e.what(), 3);
    } catch (const std::invalid_argument& e) {
        return diagnostic(app, "usage", e.what(), 2);
    } catch (const std::domain_error& e) {
        return diagnostic(app, "domain", e.what(), 2);
    } catch (const std::exception& e) {
        return diagnostic(app, "internal", e.what(), 3);
    }
    return 0;
}
