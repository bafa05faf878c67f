#include "rtip/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rtip/errors.hpp"

namespace rtip {

namespace {

constexpr const char* kCrlf = "\r\n";

std::string fmt2(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(fields[i]);
    }
    out += kCrlf;
}

ordered_json vec_json(const Vec& v) {
    ordered_json a = ordered_json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

}  // namespace

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string trajectory_csv(const Trajectory& traj, const ParameterShift* shift) {
    std::string out;
    const int n = traj.dim();
    std::vector<std::string> head{"t", "s"};
    if (shift) head.push_back("lambda");
    for (int i = 0; i < n; ++i) head.push_back("x" + std::to_string(i));
    append_row(out, head);
    for (const auto& smp : traj.samples) {
        std::vector<std::string> row{fmt17(smp.t), fmt17(smp.s)};
        if (shift) row.push_back(fmt17((*shift)(smp.s)));
        for (int i = 0; i < n; ++i) row.push_back(fmt17(smp.x[i]));
        append_row(out, row);
    }
    return out;
}

std::string path_csv(const EquilibriumPath& path) {
    std::string out;
    const int n = path.samples.empty() ? 0 : path.samples.front().x.size();
    std::vector<std::string> head{"s", "lambda"};
    for (int i = 0; i < n; ++i) head.push_back("x" + std::to_string(i));
    head.push_back("stability");
    append_row(out, head);
    for (const auto& smp : path.samples) {
        std::vector<std::string> row{fmt17(smp.s), fmt17(smp.lambda)};
        for (int i = 0; i < n; ++i) row.push_back(fmt17(smp.x[i]));
        row.push_back(to_string(smp.label));
        append_row(out, row);
    }
    return out;
}

std::string sweep_csv(const std::vector<RateSweepEntry>& entries) {
    std::string out;
    append_row(out, {"rate", "outcome", "destination", "eps_track", "final_distance",
                     "settle_time", "escape_time"});
    for (const auto& e : entries) {
        append_row(out, {fmt17(e.rate), to_string(e.verdict.outcome), e.verdict.destination,
                         fmt17(e.verdict.eps_track), fmt17(e.verdict.final_distance),
                         fmt17(e.verdict.settle_time), fmt17(e.verdict.escape_time)});
    }
    return out;
}

std::string boxes_csv(const FisBoxGrid& grid) {
    std::string out;
    const int n = grid.size() ? grid.lo.front().size() : 0;
    std::vector<std::string> head{"s"};
    for (int i = 0; i < n; ++i) head.push_back("lo" + std::to_string(i));
    for (int i = 0; i < n; ++i) head.push_back("hi" + std::to_string(i));
    append_row(out, head);
    for (int k = 0; k < grid.size(); ++k) {
        std::vector<std::string> row{fmt17(grid.s[static_cast<size_t>(k)])};
        for (int i = 0; i < n; ++i) row.push_back(fmt17(grid.lo[static_cast<size_t>(k)][i]));
        for (int i = 0; i < n; ++i) row.push_back(fmt17(grid.hi[static_cast<size_t>(k)][i]));
        append_row(out, row);
    }
    return out;
}

std::string fbs_csv(const FbsReport& report) {
    std::string out;
    append_row(out, {"lambda_from", "lambda_to", "kind", "settled_id"});
    for (const auto& v : report.violations)
        append_row(out, {fmt17(v.lambda_from), fmt17(v.lambda_to), v.kind, v.settled_id});
    return out;
}

ordered_json trajectory_json(const Trajectory& traj) {
    ordered_json j;
    j["model"] = traj.model;
    j["shift"] = traj.shift_desc;
    j["path"] = traj.path_id;
    j["rate"] = traj.rate;
    j["escaped"] = traj.escaped;
    j["escape_time"] = traj.escape_time;
    ordered_json cols = ordered_json::array({"t", "s"});
    for (int i = 0; i < traj.dim(); ++i) cols.push_back("x" + std::to_string(i));
    j["columns"] = cols;
    ordered_json rows = ordered_json::array();
    for (const auto& smp : traj.samples) {
        ordered_json row = ordered_json::array({smp.t, smp.s});
        for (int i = 0; i < smp.x.size(); ++i) row.push_back(smp.x[i]);
        rows.push_back(std::move(row));
    }
    j["samples"] = std::move(rows);
    return j;
}

ordered_json path_json(const EquilibriumPath& path) {
    ordered_json j;
    j["id"] = path.id;
    j["x_minus"] = vec_json(path.x_minus);
    j["x_plus"] = vec_json(path.x_plus);
    j["stability_minus"] = to_string(path.label_minus);
    j["stability_plus"] = to_string(path.label_plus);
    ordered_json rows = ordered_json::array();
    for (const auto& smp : path.samples) {
        ordered_json row;
        row["s"] = smp.s;
        row["lambda"] = smp.lambda;
        row["x"] = vec_json(smp.x);
        row["stability"] = to_string(smp.label);
        rows.push_back(std::move(row));
    }
    j["samples"] = std::move(rows);
    return j;
}

ordered_json verdict_json(const TippingVerdict& v) {
    ordered_json j;
    j["outcome"] = to_string(v.outcome);
    if (v.outcome == TippingOutcome::TipsToEquilibrium)
        j["destination"] = v.destination;
    else
        j["destination"] = nullptr;
    j["rate"] = v.rate;
    j["eps_track"] = v.eps_track;
    j["final_distance"] = v.final_distance;
    j["settle_time"] = v.settle_time;
    j["escape_time"] = v.escape_time;
    j["detail"] = v.detail;
    return j;
}

ordered_json sweep_json(const std::vector<RateSweepEntry>& entries) {
    ordered_json list = ordered_json::array();
    for (const auto& e : entries) {
        ordered_json item;
        item["rate"] = e.rate;
        item["verdict"] = verdict_json(e.verdict);
        list.push_back(std::move(item));
    }
    ordered_json j;
    j["entries"] = std::move(list);
    return j;
}

ordered_json critical_rate_json(const CriticalRateResult& r) {
    ordered_json j;
    j["bracket"] = ordered_json::array({r.lo, r.hi});
    j["verdict_lo"] = verdict_json(r.verdict_lo);
    j["verdict_hi"] = verdict_json(r.verdict_hi);
    j["evaluations"] = r.evaluations;
    return j;
}

ordered_json basin_json(const BasinResult& r) {
    ordered_json j;
    switch (r.kind) {
        case SettleResult::Kind::EnteredTarget: j["kind"] = "entered"; break;
        case SettleResult::Kind::Escaped: j["kind"] = "escaped"; break;
        case SettleResult::Kind::Timeout: j["kind"] = "timeout"; break;
    }
    j["id"] = r.id;
    j["index"] = r.index;
    j["t_settle"] = r.t_settle;
    j["final_state"] = vec_json(r.final_state);
    return j;
}

ordered_json sigma_json(const SigmaSpec& s) {
    ordered_json j;
    j["u"] = s.u;
    j["v"] = s.v;
    j["m"] = s.m;
    j["eta"] = s.eta;
    return j;
}

ordered_json shift_json(const ShiftSpec& s) {
    ordered_json j;
    j["type"] = s.type;
    j["lambda_minus"] = s.lambda_minus;
    j["lambda_plus"] = s.lambda_plus;
    j["center"] = s.center;
    j["width"] = s.width;
    j["sigma"] = s.sigma ? sigma_json(*s.sigma) : ordered_json(nullptr);
    return j;
}

ordered_json force_json(const ForcedTippingResult& r) {
    ordered_json j;
    j["hypothesis_met"] = r.hypothesis_met;
    j["hypothesis_note"] = r.hypothesis_note;
    j["found"] = r.found;
    j["rate"] = r.rate;
    j["sigma"] = r.found ? sigma_json(r.sigma) : ordered_json(nullptr);
    j["verdict"] = r.found ? verdict_json(r.verdict) : ordered_json(nullptr);
    ordered_json attempts = ordered_json::array();
    for (const auto& a : r.attempts) {
        ordered_json item;
        item["sigma"] = sigma_json(a.sigma);
        item["outcome"] = to_string(a.verdict.outcome);
        attempts.push_back(std::move(item));
    }
    j["attempts"] = std::move(attempts);
    return j;
}

ordered_json fbs_json(const FbsReport& r) {
    ordered_json j;
    j["forward_basin_stable"] = r.forward_basin_stable();
    j["pairs"] = r.pairs;
    ordered_json grid = ordered_json::array();
    for (double g : r.grid) grid.push_back(g);
    j["grid"] = std::move(grid);
    ordered_json viols = ordered_json::array();
    for (const auto& v : r.violations) {
        ordered_json item;
        item["lambda_from"] = v.lambda_from;
        item["lambda_to"] = v.lambda_to;
        item["kind"] = v.kind;
        item["settled_id"] = v.settled_id;
        viols.push_back(std::move(item));
    }
    j["violations"] = std::move(viols);
    return j;
}

ordered_json fis_json(const FISCertificate& c) {
    ordered_json j;
    j["holds"] = c.holds;
    j["path"] = c.path_id;
    j["boxes"] = c.boxes;
    j["non_rigorous"] = c.non_rigorous;
    ordered_json conds = ordered_json::array();
    for (const auto& cond : c.conditions) {
        ordered_json item;
        item["name"] = cond.name;
        item["holds"] = cond.holds;
        item["detail"] = cond.detail;
        conds.push_back(std::move(item));
    }
    j["conditions"] = std::move(conds);
    return j;
}

ordered_json monotone_check_json(const MonotoneCheck& mc) {
    ordered_json j;
    j["monotone"] = mc.monotone;
    j["samples"] = mc.samples;
    if (!mc.monotone) {
        ordered_json w;
        w["x"] = vec_json(mc.witness_x);
        w["lambda"] = mc.witness_lambda;
        w["row"] = mc.witness_row;
        w["col"] = mc.witness_col;
        w["entry"] = mc.witness_entry;
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

ordered_json guarantee_json(const TippingGuarantee& g) {
    ordered_json j;
    j["finding"] = to_string(g.finding);
    j["s_from"] = g.s_from;
    j["s_to"] = g.s_to;
    j["detail"] = g.detail;
    return j;
}

ordered_json no_tipping_json(const NoTippingCertificate& c) {
    ordered_json j;
    j["excluded_destination"] = c.excluded_destination;
    j["variant"] = c.variant;
    j["delta"] = c.delta;
    j["samples"] = c.samples;
    j["detail"] = c.detail;
    return j;
}

std::string phase_svg(const std::vector<EquilibriumPath>& paths,
                      const Trajectory* trajectory) {
    int n = 0;
    for (const auto& p : paths)
        if (!p.samples.empty()) n = p.samples.front().x.size();
    if (n == 0 && trajectory) n = trajectory->dim();
    if (n == 0) throw ConfigError("phase_svg: nothing to plot");

    // Plot coordinates: (x0, x1) planar, (x0, x2) spatial, (s, x0) scalar.
    const bool s_mode = (n == 1);
    const int ix = 0;
    const int iy = n >= 3 ? 2 : (n == 2 ? 1 : 0);
    auto u_of = [&](double s, const Vec& x) { return s_mode ? s : x[ix]; };
    auto v_of = [&](const Vec& x) { return x[iy]; };

    double ulo = std::numeric_limits<double>::infinity(), uhi = -ulo;
    double vlo = ulo, vhi = -ulo;
    auto absorb = [&](double u, double v) {
        ulo = std::min(ulo, u);
        uhi = std::max(uhi, u);
        vlo = std::min(vlo, v);
        vhi = std::max(vhi, v);
    };
    for (const auto& p : paths)
        for (const auto& smp : p.samples) absorb(u_of(smp.s, smp.x), v_of(smp.x));
    if (!std::isfinite(ulo) && trajectory)
        for (const auto& smp : trajectory->samples)
            absorb(u_of(smp.s, smp.x), v_of(smp.x));
    if (!std::isfinite(ulo)) throw ConfigError("phase_svg: nothing to plot");
    double upad = std::max(0.1 * (uhi - ulo), 1e-3);
    double vpad = std::max(0.1 * (vhi - vlo), 1e-3);
    ulo -= upad; uhi += upad;
    vlo -= vpad; vhi += vpad;

    const double W = 800, H = 600, M = 40;
    auto px = [&](double u) { return M + (u - ulo) / (uhi - ulo) * (W - 2 * M); };
    auto py = [&](double v) { return H - M - (v - vlo) / (vhi - vlo) * (H - 2 * M); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
           "width=\"800\" height=\"600\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
    svg << "<clipPath id=\"plot\"><rect x=\"" << fmt2(M) << "\" y=\"" << fmt2(M)
        << "\" width=\"" << fmt2(W - 2 * M) << "\" height=\"" << fmt2(H - 2 * M)
        << "\"/></clipPath>\n";
    svg << "<rect x=\"" << fmt2(M) << "\" y=\"" << fmt2(M) << "\" width=\""
        << fmt2(W - 2 * M) << "\" height=\"" << fmt2(H - 2 * M)
        << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    std::string xlabel = s_mode ? "s" : ("x" + std::to_string(ix));
    std::string ylabel = "x" + std::to_string(iy);
    svg << "<text x=\"" << fmt2(W / 2) << "\" y=\"" << fmt2(H - 12)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555555\" "
           "text-anchor=\"middle\">" << xlabel << "</text>\n";
    svg << "<text x=\"14\" y=\"" << fmt2(H / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555555\" "
           "text-anchor=\"middle\" transform=\"rotate(-90 14 " << fmt2(H / 2) << ")\">"
        << ylabel << "</text>\n";

    if (trajectory && !trajectory->samples.empty()) {
        size_t stride = std::max<size_t>(1, trajectory->samples.size() / 4000);
        svg << "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"#d62728\" "
               "stroke-width=\"1.2\" points=\"";
        for (size_t i = 0; i < trajectory->samples.size(); i += stride) {
            const auto& smp = trajectory->samples[i];
            if (i) svg << ' ';
            svg << fmt2(px(u_of(smp.s, smp.x))) << ',' << fmt2(py(v_of(smp.x)));
        }
        const auto& last = trajectory->samples.back();
        svg << ' ' << fmt2(px(u_of(last.s, last.x))) << ',' << fmt2(py(v_of(last.x)));
        svg << "\"/>\n";
    }

    for (const auto& p : paths) {
        const size_t count = p.samples.size();
        if (count == 0) continue;
        size_t stride = std::max<size_t>(1, count / 400);
        for (size_t i = 0; i < count; i += stride) {
            double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
            int r = static_cast<int>(std::lround(31 + t * (44 - 31)));
            int g = static_cast<int>(std::lround(119 + t * (160 - 119)));
            int b = static_cast<int>(std::lround(180 + t * (44 - 180)));
            const auto& smp = p.samples[i];
            svg << "<circle cx=\"" << fmt2(px(u_of(smp.s, smp.x))) << "\" cy=\""
                << fmt2(py(v_of(smp.x))) << "\" r=\"2\" fill=\"rgb(" << r << ',' << g
                << ',' << b << ")\"/>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw ConfigError("cannot create directory " + path.parent_path().string() +
                                  ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("failed writing " + path.string());
}

}  // namespace rtip
