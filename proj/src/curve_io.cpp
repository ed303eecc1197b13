#include "filamentlab/curve_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace flab {
namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct NodeTable {
    std::vector<double> s;
    std::vector<Vec3> p;
};

std::string render_csv(const NodeTable& t) {
    std::string out = "s,x,y,z\n";
    for (size_t j = 0; j < t.s.size(); ++j) {
        out += fmt17(t.s[j]);
        out += ',';
        out += fmt17(t.p[j].x);
        out += ',';
        out += fmt17(t.p[j].y);
        out += ',';
        out += fmt17(t.p[j].z);
        out += '\n';
    }
    return out;
}

NodeTable parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("s,x,y,z", 0) != 0)
        throw std::runtime_error(path + ": missing s,x,y,z header");
    NodeTable t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double v[4];
        char comma;
        if (!(row >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3]))
            throw std::runtime_error(path + ": malformed row '" + line + "'");
        t.s.push_back(v[0]);
        t.p.push_back({v[1], v[2], v[3]});
    }
    return t;
}

nlohmann::json read_sidecar(const std::string& path) {
    std::ifstream in(path + ".json");
    if (!in) throw std::runtime_error("missing sidecar " + path + ".json");
    nlohmann::json j;
    in >> j;
    return j;
}

void write_sidecar(const std::string& path, double period, const Vec3& pitch, size_t n) {
    nlohmann::json j;
    j["period"] = period;
    j["pitch"] = {pitch.x, pitch.y, pitch.z};
    j["N"] = n;
    atomic_write_text(path + ".json", j.dump(2) + "\n");
}

} // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

void write_curve_csv(const std::string& path, const QuasiCurve& curve) {
    NodeTable t;
    size_t n = curve.size();
    t.s.reserve(n);
    t.p.reserve(n);
    for (size_t j = 0; j < n; ++j) {
        t.s.push_back(curve.node(j));
        t.p.push_back(curve.node_point(j));
    }
    atomic_write_text(path, render_csv(t));
    write_sidecar(path, curve.period(), curve.pitch(), n);
}

QuasiCurve read_curve_csv(const std::string& path) {
    NodeTable t = parse_csv(path);
    nlohmann::json j = read_sidecar(path);
    double period = j.at("period").get<double>();
    auto pv = j.at("pitch");
    Vec3 pitch{pv.at(0).get<double>(), pv.at(1).get<double>(), pv.at(2).get<double>()};
    size_t n = j.at("N").get<size_t>();
    if (n != t.p.size())
        throw std::runtime_error(path + ": sidecar N disagrees with row count");
    std::vector<Vec3> periodic(n);
    for (size_t j2 = 0; j2 < n; ++j2)
        periodic[j2] = t.p[j2] - pitch * (t.s[j2] / period);
    return QuasiCurve(pitch, period, std::move(periodic));
}

void write_field_csv(const std::string& path, const SphereField& field) {
    NodeTable t;
    size_t n = field.size();
    for (size_t j = 0; j < n; ++j) {
        t.s.push_back(field.node(j));
        t.p.push_back(field[j]);
    }
    atomic_write_text(path, render_csv(t));
    write_sidecar(path, field.period(), pitch_of(field), n);
}

SphereField read_field_csv(const std::string& path) {
    NodeTable t = parse_csv(path);
    nlohmann::json j = read_sidecar(path);
    double period = j.at("period").get<double>();
    size_t n = j.at("N").get<size_t>();
    if (n != t.p.size())
        throw std::runtime_error(path + ": sidecar N disagrees with row count");
    return SphereField(std::move(t.p), period);
}

} // namespace flab
