#include "siting/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace siting {

namespace {

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string num3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// Unit 5-point star (outer radius 1), vertices precomputed so no trig runs
// at render time.
constexpr double kStar[10][2] = {
    {0.000000, -1.000000},  {0.224514, -0.309017},  {0.951057, -0.309017},
    {0.363271, 0.118034},   {0.587785, 0.809017},   {0.000000, 0.381966},
    {-0.587785, 0.809017},  {-0.363271, 0.118034},  {-0.951057, -0.309017},
    {-0.224514, -0.309017},
};

struct MapProjection {
    double lon_min, lon_span, lat_max, lat_span;
    double x0, y0, w, h;

    double x(double lon) const { return x0 + (lon - lon_min) / lon_span * w; }
    double y(double lat) const { return y0 + (lat_max - lat) / lat_span * h; }
};

void box_outline(std::string& s, const BoundingBox& b, const MapProjection& proj,
                 const char* stroke) {
    s += "<rect x=\"" + px(proj.x(b.lon_min)) + "\" y=\"" + px(proj.y(b.lat_max)) +
         "\" width=\"" + px(proj.x(b.lon_max) - proj.x(b.lon_min)) + "\" height=\"" +
         px(proj.y(b.lat_min) - proj.y(b.lat_max)) + "\" fill=\"none\" stroke=\"" + stroke +
         "\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
}

void star_marker(std::string& s, double cx, double cy, double r) {
    s += "<polygon class=\"station-pmedian\" points=\"";
    for (int k = 0; k < 10; ++k) {
        if (k) s += ' ';
        s += px(cx + kStar[k][0] * r);
        s += ',';
        s += px(cy + kStar[k][1] * r);
    }
    s += "\" fill=\"#1f3d7a\" stroke=\"#ffffff\" stroke-width=\"0.8\"/>\n";
}

}  // namespace

std::string map_svg(const std::vector<DemandPoint>& demand,
                    const std::vector<CandidateStation>& pmedian_stations,
                    const std::vector<CandidateStation>& minmax_stations,
                    const RingConfig* rings) {
    if (demand.empty()) throw std::invalid_argument("no demand points to plot");

    double lon_min = std::numeric_limits<double>::infinity(), lon_max = -lon_min;
    double lat_min = lon_min, lat_max = -lon_min;
    auto grow = [&](const GeoPoint& p) {
        lon_min = std::min(lon_min, p.lon);
        lon_max = std::max(lon_max, p.lon);
        lat_min = std::min(lat_min, p.lat);
        lat_max = std::max(lat_max, p.lat);
    };
    for (const auto& p : demand) grow(p.location);
    for (const auto& c : pmedian_stations) grow(c.location);
    for (const auto& c : minmax_stations) grow(c.location);
    if (rings) {
        grow({rings->ring4.lon_min, rings->ring4.lat_min});
        grow({rings->ring4.lon_max, rings->ring4.lat_max});
    }

    double lon_pad = std::max((lon_max - lon_min) * 0.03, 1e-6);
    double lat_pad = std::max((lat_max - lat_min) * 0.03, 1e-6);
    MapProjection proj;
    proj.lon_min = lon_min - lon_pad;
    proj.lon_span = (lon_max - lon_min) + 2 * lon_pad;
    proj.lat_max = lat_max + lat_pad;
    proj.lat_span = (lat_max - lat_min) + 2 * lat_pad;
    proj.x0 = 20;
    proj.y0 = 20;
    proj.w = 760;
    proj.h = 560;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"640\" "
         "viewBox=\"0 0 800 640\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"640\" fill=\"#ffffff\"/>\n";

    if (rings) {
        s += "<g class=\"rings\">\n";
        box_outline(s, rings->ring4, proj, "#b0b0b0");
        box_outline(s, rings->ring3, proj, "#808080");
        s += "</g>\n";
    }

    s += "<g class=\"demand\">\n";
    for (const auto& p : demand) {
        s += "<circle cx=\"" + px(proj.x(p.location.lon)) + "\" cy=\"" +
             px(proj.y(p.location.lat)) + "\" r=\"1.5\" fill=\"#999999\" fill-opacity=\"0.45\"/>\n";
    }
    s += "</g>\n";

    s += "<g class=\"minmax\">\n";
    for (const auto& c : minmax_stations) {
        s += "<circle class=\"station-minmax\" cx=\"" + px(proj.x(c.location.lon)) + "\" cy=\"" +
             px(proj.y(c.location.lat)) +
             "\" r=\"4.5\" fill=\"#d62728\" stroke=\"#ffffff\" stroke-width=\"0.8\"/>\n";
    }
    s += "</g>\n";

    s += "<g class=\"pmedian\">\n";
    for (const auto& c : pmedian_stations)
        star_marker(s, proj.x(c.location.lon), proj.y(c.location.lat), 6.5);
    s += "</g>\n";

    double ly = 612;
    s += "<text x=\"24\" y=\"" + px(ly) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#444444\">demand: " +
         std::to_string(demand.size()) + " points";
    if (!pmedian_stations.empty())
        s += ", stars: total-cost stations (" + std::to_string(pmedian_stations.size()) + ")";
    if (!minmax_stations.empty())
        s += ", red dots: worst-case stations (" + std::to_string(minmax_stations.size()) + ")";
    s += "</text>\n</svg>\n";
    return s;
}

std::string curve_svg(const SweepResult& sweep, CurveMetric metric) {
    struct Pt {
        int m;
        double v;
    };
    std::vector<Pt> pts;
    for (const auto& row : sweep.rows) {
        double v = metric == CurveMetric::PMedianAvg ? row.pmedian_avg_km : row.minmax_km;
        if (std::isnan(v)) continue;
        pts.push_back({row.m, v});
    }
    if (pts.empty()) throw std::invalid_argument("no sweep rows to plot");

    double v_min = pts[0].v, v_max = pts[0].v;
    int m_min = pts[0].m, m_max = pts[0].m;
    for (const auto& p : pts) {
        v_min = std::min(v_min, p.v);
        v_max = std::max(v_max, p.v);
        m_min = std::min(m_min, p.m);
        m_max = std::max(m_max, p.m);
    }
    double v_pad = std::max((v_max - v_min) * 0.08, 1e-9);
    v_min -= v_pad;
    v_max += v_pad;
    double m_span = std::max(m_max - m_min, 1);

    const double x0 = 70, y0 = 20, w = 690, h = 420;
    auto X = [&](double m) { return x0 + (m - m_min) / m_span * w; };
    auto Y = [&](double v) { return y0 + (v_max - v) / (v_max - v_min) * h; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"520\" "
         "viewBox=\"0 0 800 520\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"520\" fill=\"#ffffff\"/>\n";

    s += "<line x1=\"" + px(x0) + "\" y1=\"" + px(y0 + h) + "\" x2=\"" + px(x0 + w) + "\" y2=\"" +
         px(y0 + h) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    s += "<line x1=\"" + px(x0) + "\" y1=\"" + px(y0) + "\" x2=\"" + px(x0) + "\" y2=\"" +
         px(y0 + h) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    for (int t = 0; t <= 4; ++t) {
        double v = v_min + (v_max - v_min) * t / 4.0;
        double y = Y(v);
        s += "<line x1=\"" + px(x0 - 4) + "\" y1=\"" + px(y) + "\" x2=\"" + px(x0) + "\" y2=\"" +
             px(y) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        s += "<text x=\"" + px(x0 - 8) + "\" y=\"" + px(y + 4) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\" "
             "text-anchor=\"end\">" +
             num3(v) + "</text>\n";
    }
    int m_step = std::max(1, (m_max - m_min) / 10);
    for (int m = m_min; m <= m_max; m += m_step) {
        double x = X(m);
        s += "<line x1=\"" + px(x) + "\" y1=\"" + px(y0 + h) + "\" x2=\"" + px(x) + "\" y2=\"" +
             px(y0 + h + 4) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        s += "<text x=\"" + px(x) + "\" y=\"" + px(y0 + h + 18) +
             "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\" "
             "text-anchor=\"middle\">" +
             std::to_string(m) + "</text>\n";
    }

    s += "<polyline fill=\"none\" stroke=\"#1f3d7a\" stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) s += ' ';
        s += px(X(pts[i].m));
        s += ',';
        s += px(Y(pts[i].v));
    }
    s += "\"/>\n";
    for (const auto& p : pts)
        s += "<circle cx=\"" + px(X(p.m)) + "\" cy=\"" + px(Y(p.v)) +
             "\" r=\"2.5\" fill=\"#1f3d7a\"/>\n";

    const char* label = metric == CurveMetric::PMedianAvg ? "average assigned distance (km)"
                                                          : "maximum assigned distance (km)";
    s += "<text x=\"" + px(x0 + w / 2) + "\" y=\"505\" font-family=\"sans-serif\" "
         "font-size=\"12\" fill=\"#333333\" text-anchor=\"middle\">number of stations m</text>\n";
    s += "<text x=\"16\" y=\"" + px(y0 + h / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\" "
         "transform=\"rotate(-90 16 " +
         px(y0 + h / 2) + ")\" text-anchor=\"middle\">" + label + "</text>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace siting
