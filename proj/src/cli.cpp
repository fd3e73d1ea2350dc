#include "ptdimer/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "ptdimer/epfinder.hpp"
#include "ptdimer/fock.hpp"
#include "ptdimer/spectra.hpp"

namespace ptdimer {

namespace {

std::string fmt(double v) {
    std::array<char, 32> buf;
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), r.ptr};
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0;
    const char* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end)
        throw ConfigError("invalid number for '" + key + "': " + text);
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    int v = 0;
    const char* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (r.ec != std::errc() || r.ptr != end)
        throw ConfigError("invalid integer for '" + key + "': " + text);
    return v;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

const char* command_name(Command c) {
    switch (c) {
        case Command::matrix: return "matrix";
        case Command::spectrum: return "spectrum";
        case Command::sweep: return "sweep";
        case Command::find_ep: return "find-ep";
        case Command::boundary: return "boundary";
    }
    return "?";
}

DimerParams params_of(const RunConfig& c) { return {c.eps, c.t, c.lambda, c.gamma, c.u}; }

void emit_params(std::ostringstream& os, const RunConfig& c) {
    os << "# command=" << command_name(c.command) << "\n";
    os << "# t=" << fmt(c.t) << "\n# eps=" << fmt(c.eps) << "\n# lambda=" << fmt(c.lambda)
       << "\n# gamma=" << fmt(c.gamma) << "\n# U=" << fmt(c.u) << "\n";
}

void emit_scan_meta(std::ostringstream& os, const RunConfig& c, std::pair<double, double> range,
                    int steps) {
    os << "# axis=" << c.axis << "\n# range=" << fmt(range.first) << ":" << fmt(range.second)
       << "\n# steps=" << steps << "\n# tol=" << fmt(c.tol) << "\n";
}

std::string branch_path(const std::string& out, int branch) {
    const auto dot = out.find_last_of('.');
    const auto slash = out.find_last_of('/');
    const std::string tag = "_b" + std::to_string(branch);
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return out + tag;
    return out.substr(0, dot) + tag + out.substr(dot);
}

void emit_spectrum_rows(std::ostringstream& os, const char* tag, const Spectrum& sp) {
    for (int k = 0; k < 6; ++k)
        os << tag << "," << k + 1 << "," << fmt(sp.values[static_cast<size_t>(k)].real()) << ","
           << fmt(sp.values[static_cast<size_t>(k)].imag()) << "\n";
}

DimerParams with_axis_value(const DimerParams& p, const std::string& axis, double x) {
    if (axis == "lambda") return p.with_lambda(x);
    if (axis == "gamma") return p.with_gamma(x);
    return p.with_u(x);
}

// The tracked complex-capable pair: of the three reduced-cubic roots, one
// stays real for all parameters (the continuation of the X=0 root, near
// -L/K); the other two coalesce at the EPs. Emitted as E+ then E- in
// descending (re, im) order.
std::pair<cplx, cplx> tracked_pair(const DimerParams& p) {
    const CubicCoefficients cc = reduced_cubic(p);
    const std::array<cplx, 3> xs = cubic_roots(cc);
    const double disc = cubic_discriminant(cc);
    size_t anchor = 0;
    if (disc < 0.0) {
        double best = std::abs(xs[0].imag());
        for (size_t i = 1; i < 3; ++i)
            if (std::abs(xs[i].imag()) < best) {
                best = std::abs(xs[i].imag());
                anchor = i;
            }
    } else {
        const double target = (cc.k != 0.0) ? -cc.l / cc.k : 0.0;
        double best = std::abs(xs[0] - target);
        for (size_t i = 1; i < 3; ++i)
            if (std::abs(xs[i] - target) < best) {
                best = std::abs(xs[i] - target);
                anchor = i;
            }
    }
    std::array<cplx, 2> pair{};
    for (size_t i = 0, j = 0; i < 3; ++i)
        if (i != anchor) pair[j++] = cc.s + p.u() - xs[i];
    auto desc = [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    };
    if (desc(pair[1], pair[0])) std::swap(pair[0], pair[1]);
    return {pair[0], pair[1]};
}

struct Output {
    std::string path; // "-" or a file path
    std::string content;
};

void do_matrix(const RunConfig& c, std::vector<Output>& outs) {
    std::ostringstream os;
    emit_params(os, c);
    os << "bra,ket,re,im\n";
    const HamiltonianMatrix h = build_hamiltonian(params_of(c));
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j)
            os << i << "," << j << "," << fmt(h.entry(i, j).real()) << ","
               << fmt(h.entry(i, j).imag()) << "\n";
    outs.push_back({c.out, os.str()});
}

void do_spectrum(const RunConfig& c, std::vector<Output>& outs) {
    std::ostringstream os;
    emit_params(os, c);
    os << "method,k,re,im\n";
    const DimerParams p = params_of(c);
    if (p.gamma() == 0.0) emit_spectrum_rows(os, "closed_form", closed_form_spectrum(p));
    emit_spectrum_rows(os, "cardano", cardano_spectrum(p));
    emit_spectrum_rows(os, "oracle", oracle_spectrum(build_hamiltonian(p)));
    outs.push_back({c.out, os.str()});
}

void do_sweep(const RunConfig& c, std::vector<Output>& outs) {
    const auto range = c.range.value_or(std::pair{0.0, 2.0});
    const int steps = c.steps.value_or(400);
    const DimerParams base = params_of(c);

    std::vector<std::string> rows(static_cast<size_t>(steps));
    const auto eval = [&](size_t i) {
        const double x = range.first + (range.second - range.first) *
                                           static_cast<double>(i) / (steps - 1);
        const auto [ep, em] = tracked_pair(with_axis_value(base, c.axis, x));
        rows[i] = fmt(x) + "," + fmt(ep.real()) + "," + fmt(ep.imag()) + "," + fmt(em.real()) +
                  "," + fmt(em.imag()) + "\n";
    };

    int jobs = c.jobs > 0 ? c.jobs : static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::clamp(jobs, 1, steps);
    if (jobs == 1) {
        for (size_t i = 0; i < rows.size(); ++i) eval(i);
    } else {
        std::vector<std::thread> pool;
        const size_t chunk = (rows.size() + static_cast<size_t>(jobs) - 1) /
                             static_cast<size_t>(jobs);
        for (int w = 0; w < jobs; ++w) {
            const size_t lo = static_cast<size_t>(w) * chunk;
            const size_t hi = std::min(rows.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&eval, lo, hi] {
                for (size_t i = lo; i < hi; ++i) eval(i);
            });
        }
        for (std::thread& th : pool) th.join();
    }

    std::ostringstream os;
    emit_params(os, c);
    emit_scan_meta(os, c, range, steps);
    os << c.axis << ",re_e_plus,im_e_plus,re_e_minus,im_e_minus\n";
    for (const std::string& r : rows) os << r;
    outs.push_back({c.out, os.str()});
}

void do_find_ep(const RunConfig& c, std::vector<Output>& outs) {
    const auto range = c.range.value_or(std::pair{0.0, 2.0});
    const int steps = c.steps.value_or(2000);
    const auto axis = c.axis == "gamma" ? EpRecord::Axis::gamma : EpRecord::Axis::lambda;
    const ScanResult scan = scan_eps(params_of(c), axis, range, steps, c.tol);

    std::ostringstream os;
    emit_params(os, c);
    emit_scan_meta(os, c, range, steps);
    os << "axis,value,bracket_lo,bracket_hi,kind\n";
    for (const EpRecord& r : scan.eps)
        os << c.axis << "," << fmt(r.value) << "," << fmt(r.bracket_lo) << ","
           << fmt(r.bracket_hi) << ","
           << (r.kind == EpRecord::Kind::self_generated ? "self-generated"
                                                        : "interaction-generated")
           << "\n";
    for (const TangencyEvent& t : scan.tangencies)
        os << "# tangency at " << fmt(t.value) << " min_disc=" << fmt(t.min_disc) << "\n";
    outs.push_back({c.out, os.str()});
}

void do_boundary(const RunConfig& c, std::vector<Output>& outs) {
    const auto u_range = c.range.value_or(std::pair{-4.0, 4.0});
    const int steps = c.steps.value_or(81);
    const auto plane = c.axis == "gamma" ? BoundaryCurve::Plane::gamma_u
                                         : BoundaryCurve::Plane::lambda_u;
    const std::vector<BoundaryCurve> curves =
        trace_boundary(params_of(c), plane, u_range, steps, c.tol, c.axis_range);

    if (c.out == "-") {
        std::ostringstream os;
        emit_params(os, c);
        emit_scan_meta(os, c, u_range, steps);
        os << "branch,u," << c.axis << "_e\n";
        for (const BoundaryCurve& b : curves)
            for (const auto& [u, v] : b.points)
                os << b.branch << "," << fmt(u) << "," << fmt(v) << "\n";
        outs.push_back({"-", os.str()});
        return;
    }
    for (const BoundaryCurve& b : curves) {
        std::ostringstream os;
        emit_params(os, c);
        emit_scan_meta(os, c, u_range, steps);
        os << "# branch=" << b.branch << "\n";
        os << "u," << c.axis << "_e\n";
        for (const auto& [u, v] : b.points) os << fmt(u) << "," << fmt(v) << "\n";
        outs.push_back({branch_path(c.out, b.branch), os.str()});
    }
}

void validate(const RunConfig& c) {
    if (c.axis != "lambda" && c.axis != "gamma" && c.axis != "u")
        throw ConfigError("axis must be lambda, gamma or u");
    if ((c.command == Command::find_ep || c.command == Command::boundary) && c.axis == "u")
        throw ConfigError("axis must be lambda or gamma for this command");
    if (c.range && !(c.range->first < c.range->second))
        throw ConfigError("range must satisfy lo < hi");
    if (c.steps && *c.steps < 2) throw ConfigError("steps must be >= 2");
    if (!(c.tol > 0)) throw ConfigError("tol must be > 0");
    if (c.jobs < 0) throw ConfigError("jobs must be >= 0");
    if (!(c.axis_range.first < c.axis_range.second))
        throw ConfigError("axis-range must satisfy lo < hi");
    for (double v : {c.eps, c.t, c.lambda, c.gamma, c.u})
        if (!std::isfinite(v)) throw ConfigError("parameters must be finite");
}

} // namespace

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ConfigError("range must be written lo:hi, got '" + text + "'");
    return {parse_double("range", text.substr(0, colon)),
            parse_double("range", text.substr(colon + 1))};
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    static const std::set<std::string> known = {"t",   "eps",   "lambda", "gamma",
                                                "U",   "axis",  "range",  "steps",
                                                "tol", "out",   "jobs",   "axis-range"};
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(s.substr(0, eq));
        if (!known.count(key))
            throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        values[key] = trim(s.substr(eq + 1));
    }
    return values;
}

void apply_config_values(RunConfig& config, const std::map<std::string, std::string>& values,
                         const std::set<std::string>& overridden) {
    for (const auto& [key, text] : values) {
        if (overridden.count(key)) continue;
        if (key == "t")
            config.t = parse_double(key, text);
        else if (key == "eps")
            config.eps = parse_double(key, text);
        else if (key == "lambda")
            config.lambda = parse_double(key, text);
        else if (key == "gamma")
            config.gamma = parse_double(key, text);
        else if (key == "U")
            config.u = parse_double(key, text);
        else if (key == "axis")
            config.axis = text;
        else if (key == "range")
            config.range = parse_range(text);
        else if (key == "steps")
            config.steps = parse_int(key, text);
        else if (key == "tol")
            config.tol = parse_double(key, text);
        else if (key == "out")
            config.out = text;
        else if (key == "jobs")
            config.jobs = parse_int(key, text);
        else if (key == "axis-range")
            config.axis_range = parse_range(text);
    }
}

int run(const RunConfig& config) {
    std::vector<Output> outs;
    try {
        validate(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        switch (config.command) {
            case Command::matrix: do_matrix(config, outs); break;
            case Command::spectrum: do_spectrum(config, outs); break;
            case Command::sweep: do_sweep(config, outs); break;
            case Command::find_ep: do_find_ep(config, outs); break;
            case Command::boundary: do_boundary(config, outs); break;
        }
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }

    // Content is fully materialized before the first byte is written, so a
    // failure can only leave files that we then remove.
    std::vector<std::string> written;
    for (const Output& o : outs) {
        if (o.path == "-") {
            std::cout << o.content;
            continue;
        }
        std::ofstream f(o.path, std::ios::binary);
        f << o.content;
        f.close();
        if (!f) {
            for (const std::string& p : written) std::filesystem::remove(p);
            std::filesystem::remove(o.path);
            std::cerr << "error: failed writing " << o.path << "\n";
            return kExitNumerical;
        }
        written.push_back(o.path);
    }
    return kExitOk;
}

} // namespace ptdimer
