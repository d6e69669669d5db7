// sardkit command line front end: analyze, trace, blowup, chain, selftest.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sardkit/blowup.hpp"
#include "sardkit/examples.hpp"
#include "sardkit/io.hpp"
#include "sardkit/selftest.hpp"

using namespace sardkit;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kInvariant = 3, kOffSurface = 4, kChart = 5, kShooting = 6 };

struct Global {
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::string out_dir = ".";
    std::string format = "text";
};

struct Input {
    std::string path;
    std::string builtin;

    void add_to(CLI::App* cmd) {
        cmd->add_option("input", path, "Distribution JSON file ('-' for stdin)");
        cmd->add_option("--builtin", builtin, "Use a built-in distribution instead of a file")
            ->check(CLI::IsMember(builtin_names()));
    }

    Distribution load() const {
        if (!builtin.empty()) {
            if (!path.empty()) throw std::invalid_argument("give either an input file or --builtin, not both");
            return sardkit::builtin(builtin);
        }
        if (path.empty()) throw std::invalid_argument("missing input: give a distribution JSON file or --builtin");
        std::stringstream ss;
        if (path == "-") {
            ss << std::cin.rdbuf();
        } else {
            std::ifstream f(path);
            if (!f) throw std::invalid_argument("cannot read '" + path + "'");
            ss << f.rdbuf();
        }
        return distribution_from_json(ss.str());
    }
};

std::vector<double> parse_list(const std::string& s, std::size_t want, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used == 0 || used != item.size()) throw std::invalid_argument(std::string("bad number in ") + what + ": '" + item + "'");
        v.push_back(x);
    }
    if (v.size() != want) {
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(want) + " comma-separated numbers");
    }
    return v;
}

Point parse_point(const std::string& s) {
    const auto v = parse_list(s, 3, "point");
    return {v[0], v[1], v[2]};
}

Box parse_box(const std::string& s) {
    const auto v = parse_list(s, 6, "box");
    Box b{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(b.lo[i] < b.hi[i])) throw std::invalid_argument("box: need lo < hi in every coordinate");
    }
    return b;
}

Json point_json(const Point& p) { return Json::array({p[0], p[1], p[2]}); }

void print_text(std::ostream& os, const Json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    auto flat = [](const Json& v) {
        if (!v.is_array()) return false;
        for (const auto& e : v) {
            if (e.is_object() || e.is_array()) return false;
        }
        return true;
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        if (v.is_object()) {
            os << pad << it.key() << ":\n";
            print_text(os, v, indent + 2);
        } else if (v.is_array() && !flat(v)) {
            os << pad << it.key() << ":\n";
            for (const auto& e : v) {
                if (e.is_object()) {
                    os << pad << "  -\n";
                    print_text(os, e, indent + 4);
                } else {
                    os << pad << "  - " << e.dump() << '\n';
                }
            }
        } else if (v.is_array()) {
            os << pad << it.key() << ": [";
            for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << scalar(v[k]);
            os << "]\n";
        } else {
            os << pad << it.key() << ": " << scalar(v) << '\n';
        }
    }
}

void emit(const Global& g, const Json& j) {
    if (g.format == "json") {
        std::cout << j.dump(2) << '\n';
    } else {
        print_text(std::cout, j, 0);
    }
}

fs::path out_path(const Global& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return fs::path(g.out_dir) / name;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << text;
}

// ---- analyze

struct AnalyzeArgs {
    Input in;
    std::vector<std::string> points;
    int depth = 3;
    std::string scan_box;
    std::size_t scan_n = 500;
};

int cmd_analyze(const Global& g, const AnalyzeArgs& a) {
    const Distribution d = a.in.load();
    const MartinetData md = analyze(d);
    Json j;
    j["name"] = d.name;
    j["X"] = to_json(d).at("X");
    j["Y"] = to_json(d).at("Y");
    j["h_raw"] = md.h_raw.to_string();
    j["h"] = md.h.to_string();
    j["sigma_empty"] = md.sigma_empty();
    if (md.sigma_empty()) j["note"] = "Σ empty (h is a nonzero constant)";
    j["grad_h"] = Json::array({md.grad_h[0].to_string(), md.grad_h[1].to_string(), md.grad_h[2].to_string()});
    const auto zs = md.Z.to_strings();
    j["Z"] = Json::array({zs[0], zs[1], zs[2]});
    j["tangency_certificate"] = {{"ok", true}, {"quotient", md.surface.q.to_string()}};

    const Distribution loop = builtin("loop");
    if (d.X == loop.X && d.Y == loop.Y) {
        Json cmp = Json::array();
        const char* axis[] = {"d/dx", "d/dy", "d/dz"};
        const auto c = compare_mod_h(md.Z, loop_printed_Z(), md.h);
        for (std::size_t i = 0; i < 3; ++i) {
            cmp.push_back({{"component", axis[i]},
                           {"computed", c[i].computed},
                           {"printed", c[i].printed},
                           {"equal", c[i].equal},
                           {"equal_mod_h", c[i].equal_mod_h},
                           {"difference_mod_h", c[i].difference_normal_form}});
        }
        j["printed_Z_comparison"] = cmp;
    }

    Json pts = Json::array();
    for (const auto& s : a.points) {
        const Point p = parse_point(s);
        pts.push_back({{"point", point_json(p)},
                       {"stratum", to_string(classify_point(md, p, g.tol))},
                       {"bracket_generating", check_bracket_generating(d, p, a.depth)},
                       {"depth", a.depth}});
    }
    if (!pts.empty()) j["points"] = pts;

    if (!a.scan_box.empty()) {
        const Box box = parse_box(a.scan_box);
        j["scan"] = to_json(divergence_ratio_scan(md, box, a.scan_n, g.seed));
    }
    emit(g, j);
    return kOk;
}

// ---- trace

struct TraceArgs {
    Input in;
    std::string p0;
    int direction = 1;
    IntegratorOpts opts;
    std::string box;
    std::string csv = "orbit.csv";
    bool svg = false;
};

int cmd_trace(const Global& g, TraceArgs a) {
    const Distribution d = a.in.load();
    const MartinetData md = analyze(d);
    const Point p0 = parse_point(a.p0);
    if (md.sigma_empty() || std::abs(md.surface.h_at(p0)) > g.tol * md.surface.scale(p0)) {
        throw OffSurfaceError("p0 is not on the Martinet surface (|h(p0)| = " + format_double(md.surface.h_at(p0)) +
                              ")");
    }
    if (!a.box.empty()) a.opts.chart_box = parse_box(a.box);
    const OrbitTrace tr = integrate_orbit(md, p0, a.opts, a.direction);

    const fs::path csv = out_path(g, a.csv);
    {
        std::ostringstream os;
        write_orbit_csv(os, tr);
        write_file(csv, os.str());
    }
    Json j{{"name", d.name},
           {"h", md.h.to_string()},
           {"p0", point_json(p0)},
           {"stratum", to_string(classify_point(md, p0, g.tol))},
           {"direction", a.direction},
           {"termination", to_string(tr.termination)},
           {"samples", tr.samples.size()},
           {"t_end", tr.samples.back().t},
           {"end", point_json(tr.samples.back().p)},
           {"arc_length", tr.arc_length},
           {"div_integral", tr.div_integral},
           {"csv", csv.string()}};
    if (a.svg) {
        Polyline xy, xz;
        xz.color = "#b03a2e";
        for (const auto& s : tr.samples) {
            xy.pts.push_back({s.p[0], s.p[1]});
            xz.pts.push_back({s.p[0], s.p[2]});
        }
        const fs::path p1 = out_path(g, "orbit_xy.svg");
        const fs::path p2 = out_path(g, "orbit_xz.svg");
        write_file(p1, svg_plot({xy}, "orbit on the Martinet surface, (x, y)", "x", "y"));
        write_file(p2, svg_plot({xz}, "orbit on the Martinet surface, (x, z)", "x", "z"));
        j["svg"] = Json::array({p1.string(), p2.string()});
    }
    emit(g, j);
    return kOk;
}

// ---- blowup

struct BlowupArgs {
    Input in;
    std::string center;
    int j = 0;
    std::string sign = "+";
    std::size_t n = 200;
    std::string box;
    double max_err = 1e-6;
};

int cmd_blowup(const Global& g, const BlowupArgs& a) {
    const Distribution d = a.in.load();
    const MartinetData md = analyze(d);
    std::vector<std::size_t> center;
    for (double v : parse_list(a.center, static_cast<std::size_t>(std::count(a.center.begin(), a.center.end(), ',') + 1),
                               "center")) {
        if (v != std::floor(v) || v < 1 || v > 3) throw DegenerateChartError("center indices must be 1, 2 or 3");
        center.push_back(static_cast<std::size_t>(v) - 1);
    }
    if (a.j < 1 || a.j > 3) throw DegenerateChartError("--j must be 1, 2 or 3");
    int sign = 0;
    if (a.sign == "+" || a.sign == "plus" || a.sign == "1" || a.sign == "+1") sign = 1;
    if (a.sign == "-" || a.sign == "minus" || a.sign == "-1") sign = -1;
    if (sign == 0) throw DegenerateChartError("--sign must be + or -");
    ChartMap c = chart_map(center, static_cast<std::size_t>(a.j - 1), sign);

    const TransformResult tr = strict_transform(md.h, c);
    const VolumeFactor vf = volume_factor(c);
    Json cj = Json::array();
    for (auto i : c.center) cj.push_back(i + 1);
    Json j{{"name", d.name},
           {"h", md.h.to_string()},
           {"chart", {{"description", c.describe()}, {"center", cj}, {"j", a.j}, {"sign", sign}}},
           {"images", Json::array({c.images[0].to_string(), c.images[1].to_string(), c.images[2].to_string()})},
           {"alpha", tr.alpha},
           {"beta", vf.beta},
           {"jacobian_monomial", vf.jacobian_monomial.to_string()},
           {"transform", to_json(tr)}};
    if (tr.alpha == 0) {
        std::cerr << "warning: center not in zero set (alpha = 0); skipping the characteristic-field checks\n";
        j["warning"] = "center not in zero set";
        emit(g, j);
        return kOk;
    }
    const TransformedCharacteristic tc = transformed_characteristic(d, md.h, c);
    j["characteristic"] = {{"Zstar", tc.Zstar.to_string()},
                           {"Ztilde", tc.Ztilde.to_string()},
                           {"Wtilde", tc.Wtilde.to_string()},
                           {"decomposition_certified", true},
                           {"zstar_pole_order", tc.zstar_pole_order},
                           {"weighted_pole_order", tc.weighted_pole_order},
                           {"extends_smoothly", tc.weighted_pole_order == 0}};
    std::optional<Box> box;
    if (!a.box.empty()) box = parse_box(a.box);
    const CompatReport r = verify_div_compat(d, md.h, c, a.n, g.seed, box);
    Json rj = to_json(r);
    rj["ok"] = r.max_abs_err <= a.max_err;
    j["compat"] = rj;
    emit(g, j);
    return kOk;
}

// ---- chain

struct ChainArgs {
    double z0 = 0.5;
    int n = 4;
    std::string field = "printed";
    ChainOpts opts;
    bool csv = true;
};

int cmd_chain(const Global& g, ChainArgs a) {
    if (!(a.z0 > 0) || a.z0 > 1) throw std::invalid_argument("--z0 must lie in (0, 1]");
    a.opts.field = chain_field_from_string(a.field);
    const ChainReport r = run_chain(a.z0, a.n, a.opts);
    const fs::path report = out_path(g, "chain.json");
    write_file(report, to_json(r).dump(2) + "\n");

    // phase portrait and (x, z) projection of every link
    std::vector<Polyline> xy, xz;
    const char* colors[] = {"#1f4e99", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#117a65"};
    const VecField field = chain_field(a.opts.field);
    const Poly hloop = analyze(builtin("loop")).h;
    for (std::size_t k = 0; k < r.links.size(); ++k) {
        const ChainLink& l = r.links[k];
        Polyline a1, a2;
        a1.color = a2.color = colors[k % 6];
        for (std::size_t i = l.backward.p.size(); i-- > 0;) {
            a1.pts.push_back({l.backward.p[i][0], l.backward.p[i][1]});
            a2.pts.push_back({l.backward.p[i][0], l.backward.p[i][2]});
        }
        for (const auto& p : l.forward.p) {
            a1.pts.push_back({p[0], p[1]});
            a2.pts.push_back({p[0], p[2]});
        }
        xy.push_back(std::move(a1));
        xz.push_back(std::move(a2));
        if (a.csv) {
            std::ostringstream os;
            write_link_csv(os, l, hloop, field);
            write_file(out_path(g, "link_" + std::to_string(k) + ".csv"), os.str());
        }
    }
    const fs::path f2 = out_path(g, "chain_phase.svg");
    const fs::path f3 = out_path(g, "chain_xz.svg");
    write_file(f2, svg_plot(xy, "homoclinic loops, phase portrait (x, y)", "x", "y"));
    write_file(f3, svg_plot(xz, "chain of loops, projection (x, z)", "x", "z"));

    Json j{{"report", report.string()},
           {"figures", Json::array({f2.string(), f3.string()})},
           {"field", a.field},
           {"z0", a.z0},
           {"links", r.links.size()},
           {"complete", r.complete},
           {"z_seq", r.z_seq},
           {"len_seq", r.len_seq},
           {"K", r.K},
           {"checks", r.checks.size()},
           {"violations", r.ineq_violations.size()}};
    Json viol = Json::array();
    for (const auto& c : r.ineq_violations) viol.push_back({{"link", c.link}, {"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}});
    if (!viol.empty()) j["violated"] = viol;
    if (!r.error.empty()) j["error"] = r.error;
    emit(g, j);
    if (!r.error.empty()) {
        std::cerr << "error: " << r.error << " (partial report written to " << report.string() << ")\n";
        return kShooting;
    }
    return kOk;
}

// ---- selftest

int cmd_selftest(const Global& g, const SelftestOpts& o0) {
    SelftestOpts o = o0;
    o.seed = g.seed;
    const auto rows = run_selftest(o);
    bool all = true;
    for (const auto& r : rows) all = all && r.ok;
    if (g.format == "json") {
        Json a = Json::array();
        for (const auto& r : rows) a.push_back({{"name", r.name}, {"ok", r.ok}, {"detail", r.detail}});
        std::cout << Json{{"seed", g.seed}, {"all_ok", all}, {"checks", a}}.dump(2) << '\n';
    } else {
        std::size_t w = 0;
        for (const auto& r : rows) w = std::max(w, r.name.size());
        for (const auto& r : rows) {
            char t[32];
            std::snprintf(t, sizeof t, "%7.3fs", r.seconds);
            std::cout << (r.ok ? "PASS  " : "FAIL  ") << r.name << std::string(w - r.name.size() + 2, ' ') << t;
            if (!r.ok) std::cout << "  " << r.detail;
            std::cout << '\n';
        }
        std::cout << (all ? "all checks passed" : "some checks FAILED") << '\n';
    }
    if (!all) {
        for (const auto& r : rows) {
            if (!r.ok) std::cerr << "failed: " << r.name << '\n';
        }
    }
    return all ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sardkit: Martinet surfaces, characteristic flows and blow-up checks"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--seed", g.seed, "Seed for sampled checks")->capture_default_str();
    app.add_option("--tol", g.tol, "Tolerance for on-surface and stratum tests")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "Directory for CSV, SVG and report files")->capture_default_str();
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();

    AnalyzeArgs aa;
    auto* analyze_cmd = app.add_subcommand("analyze", "Martinet function, surface and characteristic field");
    aa.in.add_to(analyze_cmd);
    analyze_cmd->add_option("--point", aa.points, "Point x,y,z to classify (repeatable)");
    analyze_cmd->add_option("--depth", aa.depth, "Bracket depth for the generating test")
        ->check(CLI::Range(2, 8))
        ->capture_default_str();
    analyze_cmd->add_option("--scan-box", aa.scan_box, "Run the divergence ratio scan on lo1,lo2,lo3,hi1,hi2,hi3");
    analyze_cmd->add_option("--scan-n", aa.scan_n, "Scan sample count")->check(CLI::PositiveNumber)->capture_default_str();

    TraceArgs ta;
    auto* trace_cmd = app.add_subcommand("trace", "Integrate the characteristic field on the surface");
    ta.in.add_to(trace_cmd);
    trace_cmd->add_option("--p0", ta.p0, "Start point x,y,z")->required();
    trace_cmd->add_option("--direction", ta.direction, "+1 or -1")->check(CLI::IsMember({1, -1}))->capture_default_str();
    trace_cmd->add_option("--max-time", ta.opts.max_time)->capture_default_str();
    trace_cmd->add_option("--max-steps", ta.opts.max_steps)->capture_default_str();
    trace_cmd->add_option("--rtol", ta.opts.rel_tol)->capture_default_str();
    trace_cmd->add_option("--atol", ta.opts.abs_tol)->capture_default_str();
    trace_cmd->add_option("--stop-speed", ta.opts.stop_speed)->capture_default_str();
    trace_cmd->add_option("--projection-tol", ta.opts.projection_tol)->capture_default_str();
    trace_cmd->add_option("--box", ta.box, "Stop when leaving lo1,lo2,lo3,hi1,hi2,hi3");
    trace_cmd->add_option("--csv", ta.csv, "CSV file name inside --out-dir")->capture_default_str();
    trace_cmd->add_flag("--svg", ta.svg, "Also write orbit_xy.svg and orbit_xz.svg");

    BlowupArgs ba;
    auto* blowup_cmd = app.add_subcommand("blowup", "Directional blow-up chart: transforms and divergence check");
    ba.in.add_to(blowup_cmd);
    blowup_cmd->add_option("--center", ba.center, "Center coordinates, 1-based, e.g. 1,2,3")->required();
    blowup_cmd->add_option("--j", ba.j, "Chart direction (1-based, in the center)")->required();
    blowup_cmd->add_option("--sign", ba.sign, "Chart sign, + or -")->capture_default_str();
    blowup_cmd->add_option("--n", ba.n, "Samples for the divergence check")->check(CLI::PositiveNumber)->capture_default_str();
    blowup_cmd->add_option("--box", ba.box, "Sampling box in chart coordinates lo1,lo2,lo3,hi1,hi2,hi3");
    blowup_cmd->add_option("--max-err", ba.max_err, "Threshold reported as compat.ok")->capture_default_str();

    ChainArgs ca;
    auto* chain_cmd = app.add_subcommand("chain", "Chain of homoclinic loops and its inequality checks");
    chain_cmd->add_option("--z0", ca.z0, "Initial z limit, in (0, 1]")->capture_default_str();
    chain_cmd->add_option("--n", ca.n, "Number of links")->check(CLI::PositiveNumber)->capture_default_str();
    chain_cmd->add_option("--field", ca.field, "Planar field")
        ->check(CLI::IsMember({"printed", "derived"}))
        ->capture_default_str();
    chain_cmd->add_option("--slack", ca.opts.slack, "Relative slack of the inequality checks")->capture_default_str();
    chain_cmd->add_option("--shoot-tol", ca.opts.shoot_tol)->capture_default_str();
    chain_cmd->add_flag("!--no-csv", ca.csv, "Skip the per-link CSV files");

    SelftestOpts so;
    auto* selftest_cmd = app.add_subcommand("selftest", "Run the invariant suite");
    selftest_cmd->add_option("--cases", so.cases, "Randomized cases per identity")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    selftest_cmd->add_option("--corrupt", so.corrupt, "Test fixture: perturb the named built-in frame first")
        ->check(CLI::IsMember(builtin_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*analyze_cmd) return cmd_analyze(g, aa);
        if (*trace_cmd) return cmd_trace(g, ta);
        if (*blowup_cmd) return cmd_blowup(g, ba);
        if (*chain_cmd) return cmd_chain(g, ca);
        if (*selftest_cmd) return cmd_selftest(g, so);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvariantError& e) {
        std::cerr << "invariant failure: " << e.what() << '\n';
        return kInvariant;
    } catch (const OffSurfaceError& e) {
        std::cerr << "off surface: " << e.what() << '\n';
        return kOffSurface;
    } catch (const DegenerateChartError& e) {
        std::cerr << "degenerate chart: " << e.what() << '\n';
        return kChart;
    } catch (const ShootingError& e) {
        std::cerr << "shooting failure: " << e.what() << '\n';
        return kShooting;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}
