#include "curverec/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <vector>

#include "curverec/errors.hpp"

namespace curverec {

namespace {

constexpr double kSize = 400.0;
constexpr double kMargin = 20.0;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// Maps a bounding box uniformly into a kSize square panel at offset x0.
struct Viewport {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();
    double x0 = 0.0;

    void include(const Vec2& p) {
        min_x = std::min(min_x, p.x());
        min_y = std::min(min_y, p.y());
        max_x = std::max(max_x, p.x());
        max_y = std::max(max_y, p.y());
    }

    double scale() const {
        const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
        return (kSize - 2.0 * kMargin) / span;
    }

    Vec2 map(const Vec2& p) const {
        const double s = scale();
        return {x0 + kMargin + (p.x() - min_x) * s, kSize - kMargin - (p.y() - min_y) * s};
    }
};

std::string polyline(const std::vector<Vec2>& pts, const Viewport& vp, const char* color) {
    std::string out = "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Vec2 q = vp.map(pts[i]);
        if (i > 0) out += ' ';
        out += fmt(q.x()) + "," + fmt(q.y());
    }
    return out + "\"/>\n";
}

std::string dot(const Vec2& p, const Viewport& vp, const char* color) {
    const Vec2 q = vp.map(p);
    return "<circle cx=\"" + fmt(q.x()) + "\" cy=\"" + fmt(q.y()) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
}

std::string segment(const Vec2& a, const Vec2& b, const Viewport& vp, const char* color) {
    const Vec2 p = vp.map(a);
    const Vec2 q = vp.map(b);
    return "<line x1=\"" + fmt(p.x()) + "\" y1=\"" + fmt(p.y()) + "\" x2=\"" + fmt(q.x()) + "\" y2=\"" + fmt(q.y()) +
           "\" stroke=\"" + color + "\" stroke-dasharray=\"4 3\"/>\n";
}

std::string header(double width) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" + fmt(kSize) +
           "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(kSize) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string label(const std::string& s, double x) {
    return "<text x=\"" + fmt(x + 6.0) + "\" y=\"14\" font-family=\"sans-serif\" font-size=\"12\">" + s + "</text>\n";
}

}  // namespace

std::string frame_svg(const FrameImage& frame, int index) {
    if (frame.projected_samples.size() < 2) throw FormatError("frame has fewer than two samples");
    Viewport vp;
    for (const Vec2& p : frame.projected_samples) vp.include(p);
    vp.include(frame.A_proj);
    vp.include(frame.B_proj);
    const double reach = 0.25 * (frame.B_proj - frame.A_proj).norm();
    const Vec2 ta = frame.tangent_dir_at_A_proj.normalized() * reach;
    const Vec2 tb = frame.tangent_dir_at_B_proj.normalized() * reach;

    std::string out = header(kSize);
    out += label("frame " + std::to_string(index), 0.0);
    out += segment(frame.A_proj - ta, frame.A_proj + ta, vp, "#888888");
    out += segment(frame.B_proj - tb, frame.B_proj + tb, vp, "#888888");
    out += polyline(frame.projected_samples, vp, "#1f4e9c");
    out += dot(frame.A_proj, vp, "#c0392b");
    out += dot(frame.B_proj, vp, "#c0392b");
    return out + "</svg>\n";
}

std::string reconstruction_svg(const ReconstructedCurve& curve) {
    if (curve.points.size() < 2) throw FormatError("curve has fewer than two points");
    std::vector<Vec2> xy;
    std::vector<Vec2> xz;
    for (const Vec3& p : curve.points) {
        xy.emplace_back(p.x(), p.y());
        xz.emplace_back(p.x(), p.z());
    }
    Viewport left;
    Viewport right;
    right.x0 = kSize;
    for (const Vec2& p : xy) left.include(p);
    for (const Vec2& p : xz) right.include(p);

    std::string out = header(2.0 * kSize);
    out += label("xy", 0.0);
    out += label("xz", kSize);
    out += polyline(xy, left, "#1f4e9c");
    out += polyline(xz, right, "#1f4e9c");
    out += dot(xy.front(), left, "#c0392b");
    out += dot(xy.back(), left, "#c0392b");
    out += dot(xz.front(), right, "#c0392b");
    out += dot(xz.back(), right, "#c0392b");
    return out + "</svg>\n";
}

}  // namespace curverec
