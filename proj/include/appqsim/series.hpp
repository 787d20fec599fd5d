#pragma once
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace appqsim {

// Universal hardware-output format: one record per time point. Either a step
// index n or a wall time t identifies the point; stderr 0 is only legal when
// the series declares itself exact (oracle tables, noiseless expectations).
struct SeriesPoint {
    std::optional<long long> n;
    std::optional<double> t;
    double mean = 0.0;
    double stderr_ = 0.0;
    long long shots = 0;
};

struct MeasurementSeries {
    std::string benchmark;
    nlohmann::json params = nlohmann::json::object();
    bool exact = false;
    std::vector<SeriesPoint> points;

    void check() const {
        double prev = -std::numeric_limits<double>::infinity();
        for (const auto& p : points) {
            if (!p.n && !p.t) throw std::invalid_argument("series point needs n or t");
            const double key = p.n ? static_cast<double>(*p.n) : *p.t;
            if (key <= prev) throw std::invalid_argument("series indices must be strictly increasing");
            prev = key;
            if (p.stderr_ < 0) throw std::invalid_argument("negative stderr");
            if (p.stderr_ == 0 && !exact && p.shots > 0)
                throw std::invalid_argument("stderr 0 requires exact series");
        }
    }
};

inline nlohmann::json series_to_json(const MeasurementSeries& s) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : s.points) {
        nlohmann::json o;
        if (p.n) o["n"] = *p.n;
        if (p.t) o["t"] = *p.t;
        o["mean"] = p.mean;
        o["stderr"] = p.stderr_;
        o["shots"] = p.shots;
        pts.push_back(std::move(o));
    }
    return {{"benchmark", s.benchmark}, {"params", s.params}, {"exact", s.exact}, {"points", pts}};
}

inline MeasurementSeries series_from_json(const nlohmann::json& j) {
    MeasurementSeries s;
    s.benchmark = j.at("benchmark").get<std::string>();
    if (j.contains("params")) s.params = j.at("params");
    if (j.contains("exact")) s.exact = j.at("exact").get<bool>();
    for (const auto& o : j.at("points")) {
        SeriesPoint p;
        if (o.contains("n")) p.n = o.at("n").get<long long>();
        if (o.contains("t")) p.t = o.at("t").get<double>();
        p.mean = o.at("mean").get<double>();
        if (o.contains("stderr")) p.stderr_ = o.at("stderr").get<double>();
        else if (!s.exact) throw std::invalid_argument("stderr required unless series is exact");
        if (o.contains("shots")) p.shots = o.at("shots").get<long long>();
        s.points.push_back(p);
    }
    s.check();
    return s;
}

inline nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

inline void save_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace appqsim
