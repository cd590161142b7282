#include "hvlab/io.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace hvlab::io {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- CSV ---------------------------------------------------------------------

void write_csv(const DomainArtifact& a, std::ostream& os) {
    os << "component_id,kind,level,x,y\n";
    for (const auto& b : a.boundaries)
        for (const cplx& p : b.polyline)
            os << b.id << ",boundary," << format_g17(b.u_value) << ','
               << format_g17(p.real()) << ',' << format_g17(p.imag()) << '\n';
    int sid = 0;
    for (const auto& s : a.streamlines) {
        for (const cplx& p : s.polyline)
            os << sid << ",streamline," << format_g17(s.level) << ','
               << format_g17(p.real()) << ',' << format_g17(p.imag()) << '\n';
        ++sid;
    }
}

void write_csv_file(const DomainArtifact& a, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(a, f);
}

namespace {

double parse_double(const std::string& s, const char* what) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw SchemaError(std::string("CSV: bad ") + what + " value: " + s);
    return v;
}

}  // namespace

DomainArtifact parse_csv(std::istream& is) {
    DomainArtifact a;
    std::string line;
    if (!std::getline(is, line) || line.rfind("component_id", 0) != 0)
        throw SchemaError("CSV: missing header row");
    // Rows with the same (kind, id) are consecutive by construction.
    int cur_id = std::numeric_limits<int>::min();
    std::string cur_kind;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string f[5];
        for (int i = 0; i < 5; ++i)
            if (!std::getline(row, f[i], i == 4 ? '\n' : ','))
                throw SchemaError("CSV: short row: " + line);
        const int id = int(parse_double(f[0], "component_id"));
        const double level = f[2].empty() ? 0.0 : parse_double(f[2], "level");
        const cplx p(parse_double(f[3], "x"), parse_double(f[4], "y"));
        if (f[1] == "boundary") {
            if (f[1] != cur_kind || id != cur_id) {
                BoundaryComponent b;
                b.id = id;
                b.u_value = level;
                a.boundaries.push_back(std::move(b));
            }
            a.boundaries.back().polyline.push_back(p);
        } else if (f[1] == "streamline") {
            if (f[1] != cur_kind || id != cur_id) {
                Streamline s;
                s.level = level;
                a.streamlines.push_back(std::move(s));
            }
            a.streamlines.back().polyline.push_back(p);
        } else {
            throw SchemaError("CSV: unknown kind: " + f[1]);
        }
        cur_id = id;
        cur_kind = f[1];
    }
    a.report = json{{"schema", 1}};
    return a;
}

DomainArtifact parse_csv_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return parse_csv(f);
}

// ---- SVG ---------------------------------------------------------------------

namespace {

struct BBox {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    void add(cplx p) {
        x0 = std::min(x0, p.real());
        x1 = std::max(x1, p.real());
        y0 = std::min(y0, p.imag());
        y1 = std::max(y1, p.imag());
    }
};

void emit_path(std::ostream& os, const std::vector<cplx>& pts, cplx shift,
               const char* style, bool closed) {
    if (pts.size() < 2) return;
    os << "<path d=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const cplx p = pts[i] + shift;
        os << (i == 0 ? 'M' : 'L') << p.real() << ' ' << -p.imag() << ' ';
    }
    if (closed) os << 'Z';
    os << "\" " << style << "/>\n";
}

}  // namespace

void write_svg(const DomainArtifact& a, std::ostream& os, int tiles) {
    if (tiles < 1) tiles = 1;
    const cplx period = a.periods.empty() ? cplx(0.0) : a.periods.front();
    const int copies = (a.periods.empty() || period == cplx(0.0)) ? 1 : tiles;

    BBox bb;
    for (int k = 0; k < copies; ++k) {
        const cplx shift = double(k) * period;
        for (const auto& b : a.boundaries)
            for (const cplx& p : b.polyline) bb.add(p + shift);
        for (const auto& s : a.streamlines)
            for (const cplx& p : s.polyline) bb.add(p + shift);
    }
    if (bb.x1 < bb.x0) bb = BBox{0, 0, 1, 1};
    const double mx = 0.05 * std::max(bb.x1 - bb.x0, 1e-9);
    const double my = 0.05 * std::max(bb.y1 - bb.y0, 1e-9);

    os.precision(9);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
       << (bb.x0 - mx) << ' ' << -(bb.y1 + my) << ' ' << (bb.x1 - bb.x0 + 2 * mx)
       << ' ' << (bb.y1 - bb.y0 + 2 * my) << "\">\n";
    const double thick = 0.006 * std::max(bb.x1 - bb.x0, bb.y1 - bb.y0);
    char bstyle[160], sstyle[160];
    std::snprintf(bstyle, sizeof bstyle,
                  "fill=\"none\" stroke=\"black\" stroke-width=\"%g\"", thick);
    std::snprintf(sstyle, sizeof sstyle,
                  "fill=\"none\" stroke=\"steelblue\" stroke-width=\"%g\"",
                  0.35 * thick);
    for (int k = 0; k < copies; ++k) {
        const cplx shift = double(k) * period;
        for (const auto& s : a.streamlines)
            emit_path(os, s.polyline, shift, sstyle, false);
        for (const auto& b : a.boundaries) emit_path(os, b.polyline, shift, bstyle, true);
    }
    os << "</svg>\n";
}

void write_svg_file(const DomainArtifact& a, const std::string& path, int tiles) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_svg(a, f, tiles);
}

// ---- JSON --------------------------------------------------------------------

namespace {

json cplx_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json artifact_report(const DomainArtifact& a) {
    json j = a.report.is_object() ? a.report : json::object();
    j["schema"] = 1;
    json comps = json::array();
    for (const auto& b : a.boundaries)
        comps.push_back({{"id", b.id},
                         {"vertices", b.polyline.size()},
                         {"circulation", b.circulation},
                         {"u_value", b.u_value}});
    j["boundary_components"] = comps;
    j["streamline_count"] = a.streamlines.size();
    json per = json::array();
    for (cplx p : a.periods) per.push_back(cplx_to_json(p));
    j["periods"] = per;
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(2) << '\n';
}

// ---- configuration schema --------------------------------------------------------

namespace {

cplx json_to_cplx(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(std::string(what) + ": expected [re, im]");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

ConfigFile load_config(const json& j) {
    if (!j.is_object()) throw SchemaError("config: expected a JSON object");
    const std::string kind = j.value("kind", "");
    if (kind != "finite" && kind != "periodic")
        throw SchemaError("config: kind must be \"finite\" or \"periodic\"");

    if (!j.contains("points") || !j["points"].is_array())
        throw SchemaError("config: points must be an array of [re, im]");
    std::vector<cplx> pts;
    for (const auto& p : j["points"]) pts.push_back(json_to_cplx(p, "points"));

    if (!j.contains("weights") || !j["weights"].is_array())
        throw SchemaError("config: weights must be an array of reals");
    std::vector<double> ws;
    for (const auto& w : j["weights"]) {
        if (!w.is_number()) throw SchemaError("config: weights must be numbers");
        ws.push_back(w.get<double>());
    }

    std::variant<cfg::FiniteConfiguration, cfg::PeriodicConfiguration> parsed =
        cfg::FiniteConfiguration({cplx(0.0), cplx(1.0)}, {1.0, 1.0});
    try {
        if (kind == "finite") {
            if (j.contains("c0") || j.contains("case"))
                throw SchemaError("config: c0/case are periodic-only keys");
            parsed = cfg::FiniteConfiguration(pts, ws);
        } else {
            if (!j.contains("c0")) throw SchemaError("config: periodic needs c0");
            const cplx c0 = json_to_cplx(j["c0"], "c0");
            const std::string cs = j.value("case", "");
            if (cs != "a" && cs != "b")
                throw SchemaError("config: case must be \"a\" or \"b\"");
            parsed = cfg::PeriodicConfiguration(
                pts, ws, c0, cs == "a" ? cfg::PeriodicCase::a : cfg::PeriodicCase::b);
        }
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("config: ") + e.what());
    }
    ConfigFile out{std::move(parsed), {}, {}};

    if (j.contains("solver")) {
        const json& s = j["solver"];
        out.solver.tol = s.value("tol", out.solver.tol);
        out.solver.probes = s.value("probes", out.solver.probes);
        out.solver.seed = s.value("seed", out.solver.seed);
        if (out.solver.tol <= 0 || out.solver.probes < 1)
            throw SchemaError("config: solver.tol > 0 and solver.probes >= 1 required");
    }
    if (j.contains("build")) {
        const json& b = j["build"];
        out.build.t = b.value("t", out.build.t);
        out.build.grid = b.value("grid", out.build.grid);
        if (out.build.t <= 0 || out.build.grid < 8)
            throw SchemaError("config: build.t > 0 and build.grid >= 8 required");
        if (b.contains("a")) {
            std::vector<cplx> a;
            for (const auto& e : b["a"]) a.push_back(json_to_cplx(e, "build.a"));
            out.build.a = std::move(a);
        }
    }
    return out;
}

ConfigFile load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SchemaError("cannot open config: " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("config: invalid JSON: ") + e.what());
    }
    return load_config(j);
}

json config_to_json(const ConfigFile& c) {
    json j;
    json pts = json::array(), ws = json::array();
    if (c.is_periodic()) {
        const auto& p = std::get<cfg::PeriodicConfiguration>(c.config);
        j["kind"] = "periodic";
        for (cplx z : p.points) pts.push_back(cplx_to_json(z));
        for (double w : p.weights) ws.push_back(w);
        j["c0"] = cplx_to_json(p.c0);
        j["case"] = p.kase == cfg::PeriodicCase::a ? "a" : "b";
    } else {
        const auto& f = std::get<cfg::FiniteConfiguration>(c.config);
        j["kind"] = "finite";
        for (cplx z : f.points) pts.push_back(cplx_to_json(z));
        for (double w : f.weights) ws.push_back(w);
    }
    j["points"] = pts;
    j["weights"] = ws;
    j["solver"] = {{"tol", c.solver.tol}, {"probes", c.solver.probes},
                   {"seed", c.solver.seed}};
    j["build"] = {{"t", c.build.t}, {"grid", c.build.grid}};
    return j;
}

// ---- utilities ------------------------------------------------------------------

namespace {

// Proper intersection of segments [a,b] and [c,d] (shared endpoints excluded
// by the adjacency rule in the caller).
bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
    auto orient = [](cplx p, cplx q, cplx r) {
        const double v = (q.real() - p.real()) * (r.imag() - p.imag()) -
                         (q.imag() - p.imag()) * (r.real() - p.real());
        const double eps = 1e-14 * (std::abs(q - p) * std::abs(r - p) + 1e-300);
        return v > eps ? 1 : (v < -eps ? -1 : 0);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace

bool polyline_self_intersects(const std::vector<cplx>& pts, bool closed) {
    const std::size_t n = pts.size();
    if (n < 4) return false;
    const std::size_t m = closed ? n : n - 1;  // segment count
    auto seg = [&](std::size_t i) {
        return std::pair<cplx, cplx>(pts[i], pts[(i + 1) % n]);
    };
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 2; j < m; ++j) {
            if (closed && i == 0 && j == m - 1) continue;  // adjacent around the wrap
            const auto [a, b] = seg(i);
            const auto [c, d] = seg(j);
            if (segments_cross(a, b, c, d)) return true;
        }
    }
    return false;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    if (const char* env = std::getenv("HVLAB_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) workers = unsigned(v);
    }
    workers = std::min<std::size_t>(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    failed.store(true);
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("parallel_for: a task threw");
}

}  // namespace hvlab::io
