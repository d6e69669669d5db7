#include "sardkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sardkit {

namespace {

VecField field_from_json(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3) {
        throw std::invalid_argument(std::string("distribution JSON: '") + key + "' must be an array of 3 expressions");
    }
    std::array<std::string, 3> e;
    for (std::size_t i = 0; i < 3; ++i) {
        const Json& v = j[key][i];
        if (v.is_string()) {
            e[i] = v.get<std::string>();
        } else if (v.is_number_integer()) {
            e[i] = std::to_string(v.get<long long>());
        } else {
            throw std::invalid_argument(std::string("distribution JSON: '") + key + "' entries must be strings");
        }
    }
    return VecField::parse(e);
}

Json point_json(const Point& p) { return Json::array({p[0], p[1], p[2]}); }

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Distribution distribution_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("distribution JSON must be an object");
    if (j.contains("builtin")) return builtin(j["builtin"].get<std::string>());
    Distribution d{field_from_json(j, "X"), field_from_json(j, "Y"), j.value("name", std::string())};
    return d;
}

Json to_json(const Distribution& d) {
    const auto x = d.X.to_strings();
    const auto y = d.Y.to_strings();
    return Json{{"name", d.name}, {"X", Json::array({x[0], x[1], x[2]})}, {"Y", Json::array({y[0], y[1], y[2]})}};
}

Json to_json(const ScanReport& r) {
    return Json{{"sup_ratio", r.sup_ratio},
                {"sup_ratio_raw", r.sup_ratio_raw},
                {"argmax", point_json(r.argmax)},
                {"n", r.n},
                {"seed", r.seed},
                {"samples_used", r.samples_used}};
}

Json to_json(const CompatReport& r) {
    Json center = Json::array();
    for (auto c : r.center) center.push_back(c + 1);
    return Json{{"max_abs_err", r.max_abs_err},
                {"n", r.n},
                {"samples_used", r.samples_used},
                {"seed", r.seed},
                {"chart", {{"description", r.chart}, {"center", center}, {"j", r.j + 1}, {"sign", r.sign}}},
                {"alpha", r.alpha},
                {"beta", r.beta},
                {"worst_point", point_json(r.worst)}};
}

Json to_json(const VolumeReport& r) {
    return Json{{"t_grid", r.t_grid},
                {"vol_formula", r.vol_formula},
                {"vol_jacobian", r.vol_jacobian},
                {"rel_err", r.rel_err},
                {"max_rel_err", r.max_rel_err}};
}

Json to_json(const TransformResult& r) {
    Json j{{"total", r.total.to_string()}, {"alpha", r.alpha}, {"strict", r.strict.to_string()}};
    j["weighted"] = r.weighted ? Json(r.weighted->to_string()) : Json(nullptr);
    return j;
}

Json to_json(const ChainLink& l) {
    return Json{{"xbar", l.xbar},
                {"z_minus", l.z_minus},
                {"z_plus", l.z_plus},
                {"len_planar", l.len_planar},
                {"len_3d", l.len_3d},
                {"curvature_sign_ok", l.curvature_sign_ok},
                {"signs_ok", l.signs_ok},
                {"mirror_error", l.mirror_error},
                {"z_plus_at_floor", l.forward.z_end},
                {"z_minus_at_floor", l.backward.z_end},
                {"forward_samples", l.forward.t.size()},
                {"backward_samples", l.backward.t.size()}};
}

Json to_json(const ChainReport& r) {
    Json links = Json::array();
    for (const auto& l : r.links) links.push_back(to_json(l));
    auto checks = [](const std::vector<InequalityCheck>& v) {
        Json a = Json::array();
        for (const auto& c : v) {
            a.push_back(Json{{"link", c.link}, {"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"ok", c.ok}});
        }
        return a;
    };
    Json ev = Json::array();
    for (const auto& w : r.partial_sum_evidence) {
        Json e{{"k", w.k}, {"p_k", w.p_k}, {"reachable", w.reachable}, {"divergence_bound", w.divergence_bound}};
        if (w.reachable) {
            e["window_sum"] = w.window_sum;
            e["monotone_bound"] = w.monotone_bound;
            e["ok"] = w.ok;
        }
        ev.push_back(e);
    }
    Json j{{"z0", r.z0},
           {"field", to_string(r.field)},
           {"slack", r.slack},
           {"K", r.K},
           {"complete", r.complete},
           {"links", links},
           {"z_seq", r.z_seq},
           {"len_seq", r.len_seq},
           {"checks", checks(r.checks)},
           {"ineq_violations", checks(r.ineq_violations)},
           {"partial_sum_evidence", ev}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

void write_orbit_csv(std::ostream& os, const OrbitTrace& tr) {
    os << "t,x,y,z,speed,h_residual,cum_length,cum_div\n";
    for (const auto& s : tr.samples) {
        os << format_double(s.t) << ',' << format_double(s.p[0]) << ',' << format_double(s.p[1]) << ','
           << format_double(s.p[2]) << ',' << format_double(s.speed) << ',' << format_double(s.h_residual) << ','
           << format_double(s.cum_length) << ',' << format_double(s.cum_div) << '\n';
    }
}

void write_link_csv(std::ostream& os, const ChainLink& l, const Poly& h, const VecField& field) {
    const CompiledPoly ch(h);
    const CompiledField cf(field);
    os << "t,x,y,z,speed,h_residual,cum_length,cum_div\n";
    auto row = [&](double t, const Point& p, double speed, double len, double dv) {
        os << format_double(t) << ',' << format_double(p[0]) << ',' << format_double(p[1]) << ','
           << format_double(p[2]) << ',' << format_double(speed) << ',' << format_double(std::abs(ch(p))) << ','
           << format_double(len) << ',' << format_double(dv) << '\n';
    };
    const auto& b = l.backward;
    const double lb = b.len_3d.back();
    for (std::size_t k = b.t.size(); k-- > 1;) {
        row(-b.t[k], b.p[k], norm(cf(b.p[k])), lb - b.len_3d[k], -b.cum_div[k]);
    }
    const auto& f = l.forward;
    for (std::size_t k = 0; k < f.t.size(); ++k) {
        row(f.t[k], f.p[k], norm(cf(f.p[k])), lb + f.len_3d[k], f.cum_div[k]);
    }
}

std::string svg_plot(const std::vector<Polyline>& lines, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& l : lines) {
        for (const auto& p : l.pts) {
            if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
            x0 = std::min(x0, p[0]);
            x1 = std::max(x1, p[0]);
            y0 = std::min(y0, p[1]);
            y1 = std::max(y1, p[1]);
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1;
    if (!(y0 <= y1)) y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;

    const double W = 640, H = 480, L = 70, R = 20, T = 40, B = 50;
    auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    char buf[64];
    auto f = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    auto g = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
       << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << title << "</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0;
        const double yv = y0 + (y1 - y0) * k / 4.0;
        os << "<text x=\"" << f(sx(xv)) << "\" y=\"" << H - B + 16
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << g(xv) << "</text>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << f(sy(yv) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << g(yv) << "</text>\n";
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << xlabel << "</text>\n";
    os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\""
       << " transform=\"rotate(-90 16 " << H / 2 << ")\">" << ylabel << "</text>\n";
    for (const auto& l : lines) {
        if (l.pts.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << l.color << "\" stroke-width=\"" << l.width << "\" points=\"";
        bool first = true;
        for (const auto& p : l.pts) {
            if (!std::isfinite(p[0]) || !std::isfinite(p[1])) continue;
            os << (first ? "" : " ") << f(sx(p[0])) << ',' << f(sy(p[1]));
            first = false;
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace sardkit
